// Acceptance runner: one PASS/FAIL line per criterion, each exact and within
// its wall-clock budget.  Exit status 1 when any criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "vosa/correspondence.hpp"
#include "vosa/free_fermion.hpp"
#include "vosa/lattice_vosa.hpp"
#include "vosa/suites.hpp"
#include "vosa/twisted_fermion.hpp"

using namespace vosa;

namespace {

struct Outcome {
    bool pass = true;
    std::string note;
    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            note += (note.empty() ? "" : "; ") + what;
        }
    }
};

PuiseuxSeries power(const PuiseuxSeries& f, int d, Rat t) {
    PuiseuxSeries r = PuiseuxSeries::constant(Cyclotomic(1), t);
    for (int i = 0; i < d; ++i) r = r * f;
    return r;
}

void require_checks(Outcome& o, const std::vector<NamedCheck>& checks) {
    for (const auto& c : checks) o.require(c.pass, c.name + ": " + c.detail);
}

Outcome weber_identities() {
    Outcome o;
    const Rat t(8);
    const Rat w(17);
    const auto eta = eta_series(w);
    const auto eta2 = substitute_power(eta_series(w), 2);
    const auto etah = substitute_root(eta_series(w), 2);
    o.require(series_eq(weber(Weber::f, t), (eta * eta) / (eta2 * etah), t), "f = eta(q)^2/(eta(q^2)eta(q^{1/2}))");
    o.require(series_eq(weber(Weber::f1, t), etah / eta, t), "f1 = eta(q^{1/2})/eta(q)");
    o.require(series_eq(weber(Weber::f2, t), Cyclotomic::sqrt2() * eta2 / eta, t), "f2 = sqrt2 eta(q^2)/eta(q)");
    return o;
}

Outcome untwisted_characters() {
    Outcome o;
    const Rat t(6);
    for (int d = 1; d <= 3; ++d) {
        const auto v = build_Vfer(d);
        o.require(series_eq(v->graded_dimension(t), power(weber(Weber::f, t + Rat(1)), d, t + Rat(1)), t), "dim, d = " + std::to_string(d));
        o.require(series_eq(v->graded_dimension(t, true), power(weber(Weber::f1, t + Rat(1)), d, t + Rat(1)), t),
                  "sdim, d = " + std::to_string(d));
    }
    return o;
}

Outcome parity_twisted_characters() {
    Outcome o;
    const Rat t(5);
    for (int d = 1; d <= 3; ++d) {
        const auto m = build_parity_twisted(d);
        PuiseuxSeries want = power(weber(Weber::f2, t + Rat(1)), d, t + Rat(1));
        if (d % 2 == 1) want *= Cyclotomic::sqrt2();
        o.require(series_eq(m->graded_dimension(t), want, t), "dim_q M_sigma, d = " + std::to_string(d));
        const auto vac = m->space().vacuum();
        o.require(L_sigma(*m, 0, vac) == vac * Cyclotomic(Rat(d, 16)), "vacuum weight d/16, d = " + std::to_string(d));
    }
    return o;
}

Outcome permutation_twisted_characters() {
    Outcome o;
    const Rat t(3);
    for (int k : {2, 4}) {
        const auto m = build_perm_twisted(k);
        const auto whole = m->graded_dimension(t);
        const auto want = substitute_root(weber(Weber::f2, t * Rat(k) + Rat(1)), k) * Cyclotomic::sqrt2();
        o.require(series_eq(whole, want, t), "dim_q M_g, k = " + std::to_string(k));
        const auto vac = m->space().vacuum();
        o.require(L_g(*m, k, 0, vac) == vac * Cyclotomic(Rat(k * k + 2, 48 * k)), "vacuum weight, k = " + std::to_string(k));
        const auto pair = split_parity_unstable(m);
        o.require(series_eq(pair.plus->graded_dimension(t) * Cyclotomic(2), whole, t), "M_g^+ half, k = " + std::to_string(k));
        o.require(series_eq(pair.minus->graded_dimension(t) * Cyclotomic(2), whole, t), "M_g^- half, k = " + std::to_string(k));
    }
    return o;
}

Outcome conjecture1() {
    Outcome o;
    for (int k : {2, 4}) {
        const auto rep = conjecture1_evidence(k, Rat(3));
        for (const auto& i : rep.items) o.require(i.consistent, "k = " + std::to_string(k) + ": " + i.name);
    }
    return o;
}

Outcome virasoro() {
    Outcome o;
    for (int d = 1; d <= 2; ++d) {
        const auto v = build_Vfer(d);
        const auto r = check_virasoro(FermionAlgebra(v), conformal_vector(*v), Rat(d, 2), Rat(3), 3);
        o.require(r.pass && r.checked > 0, "V_fer^" + std::to_string(d));
    }
    const auto vl = build_boson_lattice();
    const auto r = check_virasoro(*vl, vl->conformal_vector(), Rat(1), Rat(3), 3);
    o.require(r.pass && r.checked > 0, "V_L rank 1");
    return o;
}

Outcome twisted_operators() {
    SuiteConfig cfg;
    cfg.d = 1;
    cfg.k = 2;
    cfg.w_max = Rat(2);
    cfg.window = 3;
    Outcome o;
    require_checks(o, run_suite("twisted-virasoro", cfg));
    return o;
}

Outcome lattice_twist() {
    SuiteConfig cfg;
    cfg.bound = 4;
    cfg.trunc = Rat(4);
    Outcome o;
    require_checks(o, run_suite("tau", cfg));
    return o;
}

Outcome boson_fermion() {
    SuiteConfig cfg;
    cfg.w_max = Rat(2);
    cfg.window = 3;
    Outcome o;
    require_checks(o, run_suite("phi", cfg));
    require_checks(o, run_suite("transport", cfg));
    return o;
}

Outcome parity_stability() {
    SuiteConfig cfg;
    cfg.d = 1;
    cfg.w_max = Rat(2);
    cfg.window = 3;
    cfg.trunc = Rat(3);
    Outcome o;
    require_checks(o, run_suite("parity-stability", cfg));
    return o;
}

Outcome obstruction() {
    Outcome o;
    const auto vl = build_boson_lattice();
    const auto phi = build_phi(vl, build_Vfer(2), Rat(2));
    const FockSpace& s = vl->space();
    const auto a = s.state({{0, Rat(-1)}}, {0}).terms().begin()->first;
    const auto got = four_cycle_transport(*phi, a, s.vacuum_monomial({0}));
    const Cyclotomic h(mpq_class(1, 2));
    // (1/2)(e^alpha + e^{-alpha}) (x) (e^alpha - e^{-alpha})
    const TensorState want{{{s.vacuum_monomial({1}), s.vacuum_monomial({1})}, h},
                           {{s.vacuum_monomial({1}), s.vacuum_monomial({-1})}, -h},
                           {{s.vacuum_monomial({-1}), s.vacuum_monomial({1})}, h},
                           {{s.vacuum_monomial({-1}), s.vacuum_monomial({-1})}, -h}};
    o.require(got == want, "image " + format_tensor(s, got));
    return o;
}

struct Criterion {
    int id;
    const char* what;
    double budget_s;
    std::function<Outcome()> run;
};

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {1, "Weber/eta identities, T = 8", 1, weber_identities},
        {2, "untwisted characters f^d and f1^d, d = 1..3, T = 6", 10, untwisted_characters},
        {3, "parity-twisted characters and vacuum weight d/16, T = 5", 30, parity_twisted_characters},
        {4, "permutation-twisted characters, vacuum weight, +- halves, k = 2, 4, T = 3", 60, permutation_twisted_characters},
        {5, "dim_q M_g = dim_{q^{1/k}} M_sigma(d=1), k = 2, 4, T = 3", 60, conjecture1},
        {6, "Virasoro brackets, |m|,|n| <= 3, weight <= 3", 120, virasoro},
        {7, "closed L^sigma, L^g against modes of omega, weight <= 2", 120, twisted_operators},
        {8, "tau, chi_+-, c_00r, rho, vacuum weight 1/16, dim_q M_+- at T = 4", 120, lattice_twist},
        {9, "phi intertwines (weight <= 2, window 3) and transported lifts", 120, boson_fermion},
        {10, "flip construction, f-isomorphism and parity stability, d = 1", 30, parity_stability},
        {11, "(1 2 3 4) transport of alpha(-1)1 (x) 1", 10, obstruction},
    };
    bool all = true;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.require(false, std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        o.require(secs < c.budget_s, "over the time budget");
        all = all && o.pass;
        std::printf("%s criterion %d: %s (%.2fs of %.0fs)%s%s\n", o.pass ? "PASS" : "FAIL", c.id, c.what, secs, c.budget_s,
                    o.note.empty() ? "" : " -- ", o.note.c_str());
        std::fflush(stdout);
    }
    return all ? 0 : 1;
}
