#include "vosa/suites.hpp"

#include <algorithm>
#include <map>
#include <tuple>
#include <set>
#include <sstream>
#include <stdexcept>

#include "vosa/correspondence.hpp"
#include "vosa/free_fermion.hpp"
#include "vosa/lattice_vosa.hpp"
#include "vosa/linalg.hpp"
#include "vosa/twisted_fermion.hpp"

namespace vosa {

namespace {

Cyclotomic sign(std::int64_t e) { return Cyclotomic(e % 2 == 0 ? 1L : -1L); }

std::int64_t ceil_nonneg(Rat x) { return x < Rat(0) ? 0 : x.ceil(); }

NamedCheck from_result(std::string name, std::string reference, const CheckResult& r) {
    std::ostringstream os;
    os << r.checked << " cases";
    for (const auto& w : r.witnesses) os << "; " << w;
    return {std::move(name), std::move(reference), r.pass, os.str()};
}

NamedCheck series_check(std::string name, std::string reference, const PuiseuxSeries& got, const PuiseuxSeries& want, Rat t) {
    const bool ok = series_eq(got, want, t);
    std::string detail = ok ? "equal up to q^" + t.str() : "enumerated:\n" + got.truncated(t).text() + "closed form:\n" + want.truncated(t).text();
    return {std::move(name), std::move(reference), ok, detail};
}

NamedCheck bool_check(std::string name, std::string reference, bool ok, std::string detail) {
    return {std::move(name), std::move(reference), ok, std::move(detail)};
}

ModeWindow int_window(int w) { return {Rat(-w), Rat(w), Rat(1)}; }

PuiseuxSeries power(const PuiseuxSeries& f, int d, Rat t) {
    PuiseuxSeries r = PuiseuxSeries::constant(Cyclotomic(1), t);
    for (int i = 0; i < d; ++i) r = r * f;
    return r;
}

// Module modes of a fixed list of states, memoized per basis monomial.  The
// Borcherds sums revisit the same u_a w and v_b w for every l, m, n.
class ModeMemo {
public:
    explicit ModeMemo(const VertexModule& mod) : mod_(mod) {}

    // Index of a state; states are interned so the key stays small.
    std::size_t intern(const SuperVector& x) {
        const auto it = std::find(states_.begin(), states_.end(), x);
        if (it != states_.end()) return static_cast<std::size_t>(it - states_.begin());
        states_.push_back(x);
        return states_.size() - 1;
    }

    SuperVector apply(std::size_t state, Rat n, const SuperVector& w) {
        SuperVector out;
        for (const auto& [mono, c] : w.terms()) {
            auto key = std::make_tuple(state, n, mono);
            auto it = cache_.find(key);
            if (it == cache_.end()) it = cache_.emplace(key, mod_.mode(states_[state], n, SuperVector(mono, Cyclotomic(1)))).first;
            out += it->second * c;
        }
        return out;
    }

private:
    const VertexModule& mod_;
    std::vector<SuperVector> states_;
    std::map<std::tuple<std::size_t, Rat, Monomial>, SuperVector> cache_;
};

struct BorcherdsTerm {
    std::size_t u, v;  // interned in the module memo
    const SuperVector& us;
    const SuperVector& vs;
    int parity;
};

// One Borcherds coefficient; the binomial sums stop where every term vanishes for weight reasons.
bool borcherds_holds(ModeMemo& on_module, std::map<std::tuple<std::size_t, std::size_t, std::int64_t>, std::size_t>& products,
                     const VertexModule& mod, const VertexModule& alg, const BorcherdsTerm& t, std::int64_t l, Rat m, Rat n,
                     const SuperVector& w) {
    const Rat lowest = mod.space().weight_offset();
    const Rat wu = alg.space().max_weight(t.us);
    const Rat wv = alg.space().max_weight(t.vs);
    const Rat ww = mod.space().max_weight(w);
    const std::int64_t i_lhs = std::max(ceil_nonneg(wv + ww - n - Rat(1) - lowest), ceil_nonneg(wu + ww - m - Rat(1) - lowest));
    const std::int64_t i_rhs = ceil_nonneg(wu + wv - Rat(l) - Rat(1));
    SuperVector lhs, rhs;
    const Cyclotomic s2 = sign(l + 1 + t.parity);
    for (std::int64_t i = 0; i <= i_lhs + 1; ++i) {
        const Cyclotomic c(binom(Rat(l), i));
        if (c.is_zero()) continue;
        lhs += on_module.apply(t.u, Rat(l) + m - Rat(i), on_module.apply(t.v, n + Rat(i), w)) * (sign(i) * c);
        lhs += on_module.apply(t.v, Rat(l) + n - Rat(i), on_module.apply(t.u, m + Rat(i), w)) * (sign(i) * c * s2);
    }
    for (std::int64_t i = 0; i <= i_rhs + 1; ++i) {
        const Cyclotomic c(binom(m, i));
        if (c.is_zero()) continue;
        const auto key = std::make_tuple(t.u, t.v, l + i);
        auto it = products.find(key);
        if (it == products.end()) it = products.emplace(key, on_module.intern(alg.mode(t.us, Rat(l + i), t.vs))).first;
        rhs += on_module.apply(it->second, m + n - Rat(i), w) * c;
    }
    return lhs == rhs;
}

int parity_of(const FockSpace& s, const SuperVector& v) { return s.parity(v) == Parity::odd ? 1 : 0; }

// x + nu-hat x and x - nu-hat x for an involutive lift: cosets 0 and 1/2.
std::vector<EigenState> lattice_eigen_states(const LatticeAlgebra& v, const IsometryTwist& tw) {
    const FockSpace& s = v.space();
    std::vector<EigenState> out;
    for (const SuperVector& x : {s.vacuum({1}), s.state({{0, Rat(-1)}}, {0})}) {
        const SuperVector gx = lift_action(v, tw, x);
        if (lift_action(v, tw, gx) != x) throw std::domain_error("lattice_eigen_states: lift is not an involution");
        if (!(x + gx).is_zero()) out.push_back({x + gx, Rat(0)});
        if (!(x - gx).is_zero()) out.push_back({x - gx, Rat(1, 2)});
    }
    return out;
}

std::vector<NamedCheck> suite_virasoro(const SuiteConfig& cfg) {
    std::vector<NamedCheck> out;
    const auto vf = build_Vfer(cfg.d);
    FermionAlgebra fa(vf);
    out.push_back(from_result("virasoro V_fer^d", "Virasoro bracket, central charge d/2",
                              check_virasoro(fa, conformal_vector(*vf), Rat(cfg.d, 2), cfg.w_max, cfg.window)));
    const auto vl = build_boson_lattice();
    out.push_back(from_result("virasoro V_L rank 1", "Virasoro bracket, central charge rank L",
                              check_virasoro(*vl, vl->conformal_vector(), Rat(1), cfg.w_max, cfg.window)));
    return out;
}

std::vector<NamedCheck> suite_jacobi(const SuiteConfig& cfg) {
    std::vector<NamedCheck> out;
    const auto vf = build_Vfer(cfg.d);
    FermionAlgebra fa(vf);
    std::vector<EigenState> gens;
    for (int j = 0; j < cfg.d; ++j) gens.push_back({vf->state({{j, Rat(-1, 2)}}), Rat(0)});
    out.push_back(from_result("jacobi V_fer^d", "Jacobi identity for generating fields", check_jacobi(fa, fa, gens, cfg.w_max, cfg.window)));
    const auto vl = build_boson_lattice();
    const FockSpace& s = vl->space();
    const std::vector<EigenState> lat{{s.state({{0, Rat(-1)}}, {0}), Rat(0)}, {s.vacuum({1}), Rat(0)}, {s.vacuum({-1}), Rat(0)}};
    out.push_back(from_result("jacobi V_L rank 1", "Jacobi identity for lattice vertex operators", check_jacobi(*vl, *vl, lat, cfg.w_max, cfg.window)));
    return out;
}

std::vector<NamedCheck> suite_twisted_jacobi(const SuiteConfig& cfg) {
    std::vector<NamedCheck> out;
    const auto mg = build_perm_twisted(cfg.k);
    FermionAlgebra ga(mg->algebra_ptr());
    out.push_back(from_result("twisted jacobi M_g", "g-twisted Jacobi identity, g = (1 2 ... k)",
                              check_jacobi(*mg, ga, eigen_generators(*mg), cfg.w_max, cfg.window)));
    const auto ms = build_parity_twisted(cfg.d);
    FermionAlgebra sa(ms->algebra_ptr());
    out.push_back(from_result("twisted jacobi M_sigma", "sigma-twisted Jacobi identity",
                              check_jacobi(*ms, sa, eigen_generators(*ms), cfg.w_max, cfg.window)));
    const auto vl = build_boson_lattice();
    for (Transport which : {Transport::perm, Transport::sigma_perm}) {
        const auto tw = transported_twist(vl->lattice(), which);
        const auto eig = lattice_eigen_states(*vl, tw);
        const auto chis = enumerate_chi(vl->lattice(), tw);
        for (std::size_t i = 0; i < chis.size(); ++i) {
            const std::string name = std::string(which == Transport::perm ? "twisted jacobi lattice M" : "twisted jacobi lattice M^sigma") +
                                     (i == 0 ? "_+" : "_-");
            const auto m = build_twisted_lattice_module(vl, tw, chis[i]);
            out.push_back(from_result(name, "nu-hat-twisted Jacobi identity on S[nu] (x) C_chi", check_jacobi(*m, *vl, eig, cfg.w_max, cfg.window)));
        }
    }
    return out;
}

std::vector<NamedCheck> suite_twisted_virasoro(const SuiteConfig& cfg) {
    std::vector<NamedCheck> out;
    const auto ms = build_parity_twisted(cfg.d);
    const auto mg = build_perm_twisted(cfg.k);
    for (const auto& [name, ref, m] : {std::tuple{"closed L^sigma(m)", "closed twisted Virasoro modes on M_sigma", ms},
                                       std::tuple{"closed L^g(m)", "closed twisted Virasoro modes on M_g", mg}}) {
        const bool is_sigma = m == ms;
        const SuperVector omega = conformal_vector(m->algebra());
        CheckResult r;
        for (const auto& wm : m->space().basis_up_to(m->space().weight_offset() + cfg.w_max)) {
            const SuperVector w(wm, Cyclotomic(1));
            for (std::int64_t mm = -cfg.window; mm <= cfg.window; ++mm) {
                ++r.checked;
                const SuperVector closed = is_sigma ? L_sigma(*m, mm, w) : L_g(*m, cfg.k, mm, w);
                if (closed != m->mode(omega, Rat(mm + 1), w)) r.fail("m = " + std::to_string(mm) + ", w = " + m->space().format(w));
            }
        }
        out.push_back(from_result(name, ref, r));
    }
    const Rat vac_s = Rat(cfg.d, 16);
    out.push_back(bool_check("vacuum weight M_sigma", "L^sigma(0) on the vacuum is d/16",
                             L_sigma(*ms, 0, ms->space().vacuum()) == ms->space().vacuum() * Cyclotomic(vac_s), "d/16 = " + vac_s.str()));
    const Rat vac_g(cfg.k * cfg.k + 2, 48 * cfg.k);
    out.push_back(bool_check("vacuum weight M_g", "L^g(0) on the vacuum is (k^2+2)/(48k)",
                             L_g(*mg, cfg.k, 0, mg->space().vacuum()) == mg->space().vacuum() * Cyclotomic(vac_g), vac_g.str()));
    return out;
}

std::vector<NamedCheck> suite_tau(const SuiteConfig& cfg) {
    std::vector<NamedCheck> out;
    const IntegralLattice l(IntMat{{1}});
    const auto tw = transported_twist(l, Transport::perm);
    out.push_back(from_result("tau homomorphism", "tau is well defined and multiplicative on the lifted (1 - nu)L",
                              verify_tau_homomorphism(l, tw, cfg.bound)));

    const auto chis = enumerate_chi(l, tw);
    bool chi_ok = chis.size() == 2;
    std::string chi_detail = std::to_string(chis.size()) + " extensions";
    for (std::size_t i = 0; chi_ok && i < 2; ++i) {
        const Cyclotomic base = Cyclotomic::root(8, 1) * sign(static_cast<std::int64_t>(i));
        for (std::int64_t n = -cfg.bound; n <= cfg.bound; ++n) chi_ok = chi_ok && chis[i]({n}) == base.pow(n);
    }
    if (chi_ok) chi_detail += ": chi(n alpha) = (+-e^{pi i/4})^n";
    out.push_back(bool_check("chi extensions", "exactly |R/M| = 2 extensions chi_+- of tau", chi_ok, chi_detail));

    const DeltaConstants c(tw.k(), tw.eta(), 4);
    bool c00 = true;
    for (int r = 0; r < tw.k(); ++r) c00 = c00 && c(0, 0, r).is_zero();
    out.push_back(bool_check("c_00r = 0", "Delta constants vanish at m = n = 0", c00, "r = 0.." + std::to_string(tw.k() - 1)));

    bool rho_ok = true;
    for (std::int64_t n = -cfg.bound; n <= cfg.bound; ++n) rho_ok = rho_ok && rho_factor(l, tw, {n}) == rho_factor(l, tw, tw.apply({n}));
    out.push_back(bool_check("rho(nu a) = rho(a)", "rho is nu-invariant", rho_ok, "|n| <= " + std::to_string(cfg.bound)));

    const Rat vac = twisted_vacuum_weight(l, tw);
    out.push_back(bool_check("twisted vacuum weight", "vacuum weight 1/16 for nu = -1", vac == Rat(1, 16), vac.str()));

    const auto vl = build_boson_lattice();
    const Rat t = cfg.trunc;
    const auto eta = eta_series(t + Rat(2));
    const auto eta_half = substitute_root(eta_series(Rat(2) * t + Rat(4)), 2);
    for (std::size_t i = 0; i < chis.size(); ++i) {
        const auto m = build_twisted_lattice_module(vl, tw, chis[i]);
        // dim_q M * eta(q^{1/2}) = eta(q) avoids dividing truncated series.
        out.push_back(series_check(std::string("dim_q M_") + (i == 0 ? "+" : "-"), "dim_q M_+- = eta(q)/eta(q^{1/2})",
                                   series_arith(m->graded_dimension(t + Rat(1)), eta_half, SeriesOp::mul), eta, t));
    }
    return out;
}

std::vector<NamedCheck> suite_phi(const SuiteConfig& cfg) {
    std::vector<NamedCheck> out;
    const auto vl = build_boson_lattice();
    const auto phi = build_phi(vl, build_Vfer(2), cfg.w_max);
    out.push_back(from_result("phi intertwines", "phi(u_n v) = phi(u)_n phi(v)", verify_phi_intertwines(*phi, *vl, cfg.w_max, int_window(cfg.window))));
    out.push_back(bool_check("phi injective", "phi is injective on each weight space", phi->injective(),
                             "weights <= " + cfg.w_max.str()));
    const auto vf = phi->target_ptr();
    const SuperVector one = vf->vacuum();
    const bool e1 = (*phi)(vl->space().vacuum({1})) == vf->apply(alpha_plus(), Rat(-1, 2), one);
    const bool e2 = (*phi)(vl->space().vacuum({-2})) == vf->apply(alpha_minus(), Rat(-3, 2), vf->apply(alpha_minus(), Rat(-1, 2), one));
    out.push_back(bool_check("phi on sectors", "phi(e^alpha) = alpha^+(-1/2)1, phi(e^{-2alpha}) = alpha^-(-3/2)alpha^-(-1/2)1",
                             e1 && e2, e1 && e2 ? "both match" : "mismatch"));
    return out;
}

std::vector<NamedCheck> suite_transport(const SuiteConfig& cfg) {
    std::vector<NamedCheck> out;
    const auto vl = build_boson_lattice();
    const auto phi = build_phi(vl, build_Vfer(2), cfg.w_max);
    out.push_back(from_result("transport", "phi^{-1} o (1 2) o phi and phi^{-1} o sigma(1 2) o phi are lattice lifts",
                              verify_transport(*phi, *vl, cfg.w_max, int_window(cfg.window))));
    const FockSpace& s = vl->space();
    const Cyclotomic i = Cyclotomic::i();
    bool ok = true;
    for (std::int64_t n = -3; n <= 3; ++n) {
        ok = ok && transported_automorphism(*vl, Transport::perm, s.vacuum({n})) == s.vacuum({-n}) * (-i).pow(n);
        ok = ok && transported_automorphism(*vl, Transport::sigma_perm, s.vacuum({n})) == s.vacuum({-n}) * i.pow(n);
    }
    const SuperVector h = s.state({{0, Rat(-1)}}, {0});
    ok = ok && transported_automorphism(*vl, Transport::perm, h) == -h;
    out.push_back(bool_check("transported lifts", "nu-hat e^{n alpha} = (-i)^n e^{-n alpha}, sigma nu-hat e^{n alpha} = i^n e^{-n alpha}",
                             ok, "|n| <= 3 and alpha(-1)1"));
    return out;
}

std::vector<NamedCheck> suite_parity_stability(const SuiteConfig& cfg) {
    std::vector<NamedCheck> out;
    const auto m = build_parity_twisted(cfg.d);
    const FockSpace& s = m->space();
    const Rat top = s.weight_offset() + cfg.w_max;
    std::vector<SuperVector> states;
    for (const auto& um : m->algebra().basis_up_to(cfg.w_max)) states.emplace_back(um, Cyclotomic(1));
    const ModeWindow window = int_window(cfg.window);
    if (cfg.d % 2 == 0) {
        auto p = [&s](const SuperVector& x) { return s.parity_map(x); };
        out.push_back(from_result("M_sigma parity stable", "even d: sigma_M makes M_sigma parity stable",
                                  check_parity_stable(*m, p, states, top, window)));
        return out;
    }
    const auto pair = split_parity_unstable(m);
    const auto flipped = flip_module(pair.plus);
    out.push_back(series_check("flip keeps dim_q", "dim_q flip(M) = dim_q M", flipped->graded_dimension(cfg.trunc),
                               pair.plus->graded_dimension(cfg.trunc), cfg.trunc));
    // f = sigma on M_sigma maps flip(M_sigma^+) onto M_sigma^-.
    CheckResult f;
    for (const auto& w : pair.plus->basis_up_to(top)) {
        const SuperVector fw = s.parity_map(w);
        ++f.checked;
        if (pair.minus->project(fw) != fw) f.fail("f(w) not in M^-: " + s.format(w));
        for (const auto& u : states) {
            for (Rat n : window.values()) {
                ++f.checked;
                if (s.parity_map(flipped->mode(u, n, w)) != pair.minus->mode(u, n, fw)) {
                    f.fail("f does not intertwine: u = " + m->algebra().format(u) + ", n = " + n.str());
                }
            }
        }
    }
    out.push_back(from_result("f: flip(M^+) -> M^-", "f intertwines flip(M_sigma^+) with M_sigma^-", f));
    auto sum = std::make_shared<DirectSumModule>(std::vector<ModulePtr>{pair.plus, flipped});
    auto swap = [](const SuperVector& x) {
        return DirectSumModule::tagged(DirectSumModule::component(x, 1), 0) + DirectSumModule::tagged(DirectSumModule::component(x, 0), 1);
    };
    out.push_back(from_result("M + flip(M) parity stable", "M (+) flip(M) is parity stable",
                              check_parity_stable(*sum, swap, states, top, window)));
    return out;
}

}  // namespace

std::vector<EigenState> eigen_generators(const IterateModule& m) {
    const int d = m.algebra().num_generators();
    std::set<Rat> shifts;
    for (int j = 0; j < d; ++j) {
        for (const auto& c : m.field(j)) shifts.insert(c.shift);
    }
    std::vector<EigenState> out;
    for (Rat s : shifts) {
        // Combinations whose field has no component outside shift s: the kernel of
        // the map to the other components, found from linear dependencies.
        SpanBasis span;
        std::vector<int> inserted;
        for (int j = 0; j < d; ++j) {
            SuperVector y;
            for (const auto& c : m.field(j)) {
                if (c.shift == s) continue;
                for (const auto& [g, x] : c.h) y.add(Monomial{{Mode{g, c.shift}}, {}, 0}, x);
            }
            const SuperVector gen = m.algebra().state({{j, Rat(-1, 2)}});
            if (y.is_zero()) {
                out.push_back({gen, s});
                continue;
            }
            if (const auto coords = span.coordinates(y)) {
                SuperVector state = gen;
                for (std::size_t i = 0; i < inserted.size(); ++i) {
                    if (!(*coords)[i].is_zero()) state -= m.algebra().state({{inserted[i], Rat(-1, 2)}}) * (*coords)[i];
                }
                out.push_back({state, s});
            } else {
                span.insert(y);
                inserted.push_back(j);
            }
        }
    }
    return out;
}

CheckResult check_virasoro(const VertexModule& mod, const SuperVector& omega, Rat c, Rat w_max, int window) {
    CheckResult r;
    auto L = [&](std::int64_t m, const SuperVector& w) { return mod.mode(omega, Rat(m + 1), w); };
    for (const auto& w : mod.basis_up_to(mod.space().weight_offset() + w_max)) {
        for (std::int64_t m = -window; m <= window; ++m) {
            for (std::int64_t n = -window; n <= window; ++n) {
                ++r.checked;
                SuperVector rhs = L(m + n, w) * Cyclotomic(m - n);
                if (m + n == 0) rhs += w * Cyclotomic(Rat(m * m * m - m, 12) * c);
                if (L(m, L(n, w)) - L(n, L(m, w)) != rhs) {
                    r.fail("m = " + std::to_string(m) + ", n = " + std::to_string(n) + ", w = " + mod.space().format(w));
                }
            }
        }
    }
    return r;
}

CheckResult check_jacobi(const VertexModule& mod, const VertexModule& alg, const std::vector<EigenState>& states, Rat w_max,
                         int window) {
    CheckResult r;
    const auto basis = mod.basis_up_to(mod.space().weight_offset() + w_max);
    ModeMemo on_module(mod);
    std::map<std::tuple<std::size_t, std::size_t, std::int64_t>, std::size_t> products;
    for (const auto& u : states) {
        for (const auto& v : states) {
            const BorcherdsTerm term{on_module.intern(u.state), on_module.intern(v.state), u.state, v.state,
                                     parity_of(alg.space(), u.state) * parity_of(alg.space(), v.state)};
            for (const auto& w : basis) {
                for (std::int64_t l = -window; l <= window; ++l) {
                    for (std::int64_t mi = -window; mi <= window; ++mi) {
                        for (std::int64_t ni = -window; ni <= window; ++ni) {
                            ++r.checked;
                            const Rat m = Rat(mi) + u.coset;
                            const Rat n = Rat(ni) + v.coset;
                            if (!borcherds_holds(on_module, products, mod, alg, term, l, m, n, w)) {
                                std::ostringstream os;
                                os << "u = " << alg.space().format(u.state) << ", v = " << alg.space().format(v.state) << ", (l, m, n) = ("
                                   << l << ", " << m.str() << ", " << n.str() << "), w = " << mod.space().format(w);
                                r.fail(os.str());
                            }
                        }
                    }
                }
            }
        }
    }
    return r;
}

std::vector<std::string> suite_names() {
    return {"virasoro", "jacobi", "twisted-jacobi", "twisted-virasoro", "tau", "phi", "transport", "parity-stability"};
}

std::vector<NamedCheck> run_suite(const std::string& suite, const SuiteConfig& cfg) {
    if (cfg.d < 1) throw std::invalid_argument("d must be positive");
    if (cfg.k < 2 || cfg.k % 2 != 0) throw std::invalid_argument("odd k out of scope");
    if (cfg.w_max < Rat(0) || cfg.trunc < Rat(0) || cfg.window < 0 || cfg.bound < 0) throw std::invalid_argument("negative parameter");
    std::vector<NamedCheck> out;
    if (suite == "virasoro") out = suite_virasoro(cfg);
    else if (suite == "jacobi") out = suite_jacobi(cfg);
    else if (suite == "twisted-jacobi") out = suite_twisted_jacobi(cfg);
    else if (suite == "twisted-virasoro") out = suite_twisted_virasoro(cfg);
    else if (suite == "tau") out = suite_tau(cfg);
    else if (suite == "phi") out = suite_phi(cfg);
    else if (suite == "transport") out = suite_transport(cfg);
    else if (suite == "parity-stability") out = suite_parity_stability(cfg);
    else throw std::invalid_argument("unknown suite: " + suite);
    std::sort(out.begin(), out.end(), [](const NamedCheck& a, const NamedCheck& b) { return a.name < b.name; });
    return out;
}

std::vector<std::string> character_targets() { return {"vfer", "msigma", "mg", "vl", "mpm"}; }

CharacterResult character(const std::string& target, const SuiteConfig& cfg) {
    const Rat t = cfg.trunc;
    if (t < Rat(0)) throw std::invalid_argument("negative truncation");
    if (target == "vfer" || target == "msigma") {
        if (cfg.d < 1) throw std::invalid_argument("d must be positive");
    }
    if (target == "vfer") {
        const auto v = build_Vfer(cfg.d);
        const PuiseuxSeries s = FermionAlgebra(v).graded_dimension(t);
        const PuiseuxSeries want = power(weber(Weber::f, t + Rat(1)), cfg.d, t + Rat(1));
        return {s, series_check("matches f(q)^" + std::to_string(cfg.d), "dim_q V_fer^d = f(q)^d", s, want, t)};
    }
    if (target == "msigma") {
        const auto m = build_parity_twisted(cfg.d);
        const PuiseuxSeries s = m->graded_dimension(t);
        PuiseuxSeries want = power(weber(Weber::f2, t + Rat(1)), cfg.d, t + Rat(1));
        std::string label = "f2(q)^" + std::to_string(cfg.d);
        if (cfg.d % 2 == 1) {
            want *= Cyclotomic::sqrt2();
            label = "sqrt2*" + label;
        }
        return {s, series_check("matches " + label, "dim_q M_sigma = f2(q)^d (d even), sqrt2 f2(q)^d (d odd)", s, want, t)};
    }
    if (target == "mg") {
        if (cfg.k < 2 || cfg.k % 2 != 0) throw std::invalid_argument("odd k out of scope");
        const auto m = build_perm_twisted(cfg.k);
        const PuiseuxSeries s = m->graded_dimension(t);
        const PuiseuxSeries want = substitute_root(weber(Weber::f2, t * Rat(cfg.k) + Rat(1)), cfg.k) * Cyclotomic::sqrt2();
        return {s, series_check("matches sqrt2*f2(q^{1/" + std::to_string(cfg.k) + "})", "dim_q M_g = sqrt2 f2(q^{1/k})", s, want, t)};
    }
    if (target == "vl") {
        const auto v = build_boson_lattice();
        const PuiseuxSeries s = v->graded_dimension(t);
        const PuiseuxSeries want = power(weber(Weber::f, t + Rat(1)), 2, t + Rat(1));
        return {s, series_check("matches f(q)^2", "dim_q V_{Z alpha} = dim_q V_fer^2 = f(q)^2", s, want, t)};
    }
    if (target == "mpm") {
        const auto v = build_boson_lattice();
        const auto tw = transported_twist(v->lattice(), Transport::perm);
        const auto m = build_twisted_lattice_module(v, tw, enumerate_chi(v->lattice(), tw).front());
        const PuiseuxSeries s = m->graded_dimension(t);
        const auto eta = eta_series(t + Rat(2));
        const auto eta_half = substitute_root(eta_series(Rat(2) * t + Rat(4)), 2);
        return {s, series_check("matches eta(q)/eta(q^{1/2})", "dim_q M_+- = eta(q)/eta(q^{1/2})",
                                series_arith(m->graded_dimension(t + Rat(1)), eta_half, SeriesOp::mul), eta, t)};
    }
    throw std::invalid_argument("unknown character target: " + target);
}

}  // namespace vosa
