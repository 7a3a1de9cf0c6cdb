// vosa: characters, verification suites and conjecture evidence from the command line.
//
// Exit codes: 0 all checks pass, 1 a check failed, 2 usage or configuration error.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "vosa/correspondence.hpp"
#include "vosa/suites.hpp"

namespace {

using nlohmann::json;
using vosa::NamedCheck;
using vosa::Rat;

constexpr const char* kVersion = "1.0.0";

struct Options {
    std::string command;
    std::string target;
    int d = 1;
    int k = 2;
    std::string trunc;
    std::string w_max = "2";
    int window = 3;
    int cyclotomic_order = 0;
    std::string format = "text";
    std::string out;
    std::int64_t bound = 4;
};

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

Rat parse_rat(const std::string& s, const char* flag) {
    try {
        return Rat::parse(s);
    } catch (const std::exception&) {
        throw UsageError(std::string(flag) + ": expected an integer or p/q, got '" + s + "'");
    }
}

// Smallest n such that every coefficient the computation produces lies in Q(zeta_n).
int required_order(const Options& o) {
    const int with_k = std::lcm(8, 4 * o.k);
    if (o.command == "character") {
        if (o.target == "vfer" || o.target == "vl") return 1;
        if (o.target == "mg") return with_k;
        if (o.target == "mpm") return 16;
        return 8;
    }
    if (o.command == "verify") {
        if (o.target == "virasoro" || o.target == "jacobi") return 1;
        if (o.target == "twisted-jacobi" || o.target == "twisted-virasoro") return std::lcm(16, with_k);
        if (o.target == "tau") return 16;
        return 8;
    }
    return o.k == 2 ? 16 : with_k;
}

json config_json(const Options& o, Rat trunc, Rat w_max, int order) {
    return json{{"command", o.command}, {"target", o.target}, {"d", o.d},        {"k", o.k},
                {"T", trunc.str()},      {"W", w_max.str()},    {"window", o.window}, {"bound", o.bound},
                {"cyclotomic_order", order}};
}

json check_json(const NamedCheck& c, const std::string& status) {
    return json{{"name", c.name}, {"reference", c.reference}, {"status", status}, {"detail", c.detail}};
}

void emit(const Options& o, const json& report, const std::string& text) {
    const std::string body = o.format == "json" ? report.dump(2) + "\n" : text;
    if (o.out.empty()) {
        std::cout << body;
        return;
    }
    std::ofstream f(o.out);
    if (!f) throw UsageError("cannot open " + o.out);
    f << body;
}

int run(const Options& o) {
    const Rat trunc = parse_rat(o.trunc.empty() ? (o.command == "character" ? "10" : "3") : o.trunc, "--T");
    const Rat w_max = parse_rat(o.w_max, "--W");
    if (trunc < Rat(0) || w_max < Rat(0)) throw UsageError("--T and --W must be non-negative");
    if (o.window < 0 || o.bound < 0) throw UsageError("--window and --bound must be non-negative");
    if (o.format != "text" && o.format != "json") throw UsageError("--format must be text or json");
    if (o.k % 2 != 0 || o.k < 2) throw UsageError("odd k out of scope");
    if (o.d < 1) throw UsageError("--d must be positive");
    const int needed = required_order(o);
    const int order = o.cyclotomic_order == 0 ? needed : o.cyclotomic_order;
    if (order < 1 || order % needed != 0) {
        throw UsageError("--cyclotomic-order " + std::to_string(order) + " must be a multiple of " + std::to_string(needed));
    }

    vosa::SuiteConfig cfg;
    cfg.d = o.d;
    cfg.k = o.k;
    cfg.trunc = trunc;
    cfg.w_max = w_max;
    cfg.window = o.window;
    cfg.bound = o.bound;

    json report{{"version", kVersion}, {"config", config_json(o, trunc, w_max, order)}, {"checks", json::array()}};
    std::ostringstream text;

    if (o.command == "character") {
        const auto res = vosa::character(o.target, cfg);
        report["series"] = res.series.to_json();
        report["checks"].push_back(check_json(res.verdict, res.verdict.pass ? "pass" : "fail"));
        text << res.series.text() << res.verdict.name << ": " << (res.verdict.pass ? "true" : "false") << "\n";
        if (!res.verdict.pass) text << res.verdict.detail << "\n";
        emit(o, report, text.str());
        return res.verdict.pass ? 0 : 1;
    }
    if (o.command == "verify") {
        const auto checks = vosa::run_suite(o.target, cfg);
        bool all = true;
        for (const auto& c : checks) {
            all = all && c.pass;
            report["checks"].push_back(check_json(c, c.pass ? "pass" : "fail"));
            text << (c.pass ? "PASS " : "FAIL ") << c.name << ": " << c.detail << "\n";
        }
        emit(o, report, text.str());
        return all ? 0 : 1;
    }
    // evidence
    const int which = o.target == "1" ? 1 : o.target == "2" ? 2 : 0;
    if (which == 0) throw UsageError("evidence: expected conjecture 1 or 2");
    if (which == 2 && o.k != 2 && o.k != 4) throw UsageError("evidence 2: k must be 2 or 4");
    const vosa::EvidenceReport ev = which == 1 ? vosa::conjecture1_evidence(o.k, trunc)
                                               : vosa::conjecture2_evidence(o.k, w_max, {Rat(-o.window), Rat(o.window), Rat(1, 2)});
    std::vector<vosa::EvidenceItem> items = ev.items;
    std::sort(items.begin(), items.end(), [](const auto& a, const auto& b) { return a.name < b.name; });
    for (const auto& i : items) {
        const std::string status = i.consistent ? "evidence-consistent" : "evidence-inconsistent";
        report["checks"].push_back(json{{"name", i.name},
                                        {"reference", which == 1 ? "character correspondence under q -> q^{1/k}"
                                                                 : "permutation automorphisms as lifts of lattice isometries"},
                                        {"status", status},
                                        {"detail", i.detail}});
        text << status << " " << i.name << ": " << i.detail << "\n";
    }
    report["status"] = ev.status();
    text << "status: " << ev.status() << "\n";
    emit(o, report, text.str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Vertex operator superalgebra characters, identities and correspondence evidence"};
    app.require_subcommand(1);
    Options o;

    auto common = [&o](CLI::App* sub) {
        sub->add_option("--d", o.d, "number of fermions");
        sub->add_option("--k", o.k, "cycle length (even)");
        sub->add_option("--T", o.trunc, "truncation of q-series (integer or p/q)");
        sub->add_option("--W", o.w_max, "weight cutoff above the lowest weight (integer or p/q)");
        sub->add_option("--window", o.window, "mode window bound");
        sub->add_option("--cyclotomic-order", o.cyclotomic_order, "cyclotomic order n (default: smallest sufficient)");
        sub->add_option("--format", o.format, "text or json");
        sub->add_option("--out", o.out, "write the report to this file");
        sub->add_option("--bound", o.bound, "coordinate bound for lattice brute force");
    };

    auto* character = app.add_subcommand("character", "enumerated graded dimension against its closed form");
    character->add_option("target", o.target, "vfer | msigma | mg | vl | mpm")->required()->check(CLI::IsMember(vosa::character_targets()));
    common(character);

    auto* verify = app.add_subcommand("verify", "run a verification suite");
    verify->add_option("suite", o.target, "suite name")->required()->check(CLI::IsMember(vosa::suite_names()));
    common(verify);

    auto* evidence = app.add_subcommand("evidence", "evidence for conjecture 1 or 2");
    evidence->add_option("conjecture", o.target, "1 or 2")->required()->check(CLI::IsMember({"1", "2"}));
    common(evidence);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    for (auto* sub : {character, verify, evidence}) {
        if (sub->parsed()) o.command = sub->get_name();
    }
    try {
        return run(o);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
