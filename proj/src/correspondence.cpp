#include "vosa/correspondence.hpp"

#include <deque>
#include <sstream>
#include <stdexcept>

#include "vosa/qseries.hpp"
#include "vosa/twisted_fermion.hpp"

namespace vosa {

namespace {

Rat weight_of(const FockSpace& s, const SuperVector& v) { return s.max_weight(v); }

// Terms of v grouped by weight.
std::map<Rat, SuperVector> by_weight(const FockSpace& s, const SuperVector& v) {
    std::map<Rat, SuperVector> out;
    for (const auto& [m, c] : v.terms()) out[s.weight(m)].add(m, c);
    return out;
}

SuperVector combine(const std::vector<SuperVector>& vs, const std::vector<Cyclotomic>& coords) {
    SuperVector out;
    for (std::size_t i = 0; i < vs.size(); ++i) {
        if (!coords[i].is_zero()) out += vs[i] * coords[i];
    }
    return out;
}

std::string witness(const FockSpace& alg, const FockSpace& mod, const SuperVector& u, Rat n, const SuperVector& w) {
    std::ostringstream os;
    os << "u = " << alg.format(u) << ", n = " << n.str() << ", w = " << mod.format(w);
    return os.str();
}

}  // namespace

GradedLinearMap::GradedLinearMap(SpacePtr source, SpacePtr target, Rat cutoff, Rule rule)
    : source_(std::move(source)), target_(std::move(target)), cutoff_(cutoff), rule_(std::move(rule)) {
    if (cutoff_ < Rat(0)) throw std::invalid_argument("GradedLinearMap: negative cutoff");
}

SuperVector GradedLinearMap::image(const Monomial& m) const {
    {
        std::lock_guard lock(mutex_);
        if (auto it = cache_.find(m); it != cache_.end()) return it->second;
    }
    SuperVector v = rule_(m);
    std::lock_guard lock(mutex_);
    return cache_.emplace(m, std::move(v)).first->second;
}

SuperVector GradedLinearMap::operator()(const SuperVector& v) const {
    SuperVector out;
    for (const auto& [m, c] : v.terms()) out += image(m) * c;
    return out;
}

const GradedLinearMap::Fiber& GradedLinearMap::fiber(Rat w) const {
    {
        std::lock_guard lock(mutex_);
        if (auto it = fibers_.find(w); it != fibers_.end()) return it->second;
    }
    Fiber f;
    const auto basis = source_->basis_at(w);
    f.source_dim = basis.size();
    for (const auto& m : basis) {
        if (f.span.insert(image(m))) f.sources.push_back(m);
    }
    std::lock_guard lock(mutex_);
    return fibers_.emplace(w, std::move(f)).first->second;
}

std::optional<SuperVector> GradedLinearMap::preimage(const SuperVector& v) const {
    SuperVector out;
    for (const auto& [w, part] : by_weight(*target_, v)) {
        const Fiber& f = fiber(w);
        const auto coords = f.span.coordinates(part);
        if (!coords) return std::nullopt;
        for (std::size_t i = 0; i < f.sources.size(); ++i) {
            if (!(*coords)[i].is_zero()) out.add(f.sources[i], (*coords)[i]);
        }
    }
    return out;
}

std::map<Monomial, SuperVector> GradedLinearMap::images() const {
    std::map<Monomial, SuperVector> out;
    for (const auto& m : source_->basis_up_to(cutoff_)) out.emplace(m, image(m));
    return out;
}

bool GradedLinearMap::injective() const {
    std::map<Rat, bool> seen;
    for (const auto& m : source_->basis_up_to(cutoff_)) {
        const Rat w = source_->weight(m);
        if (seen.emplace(w, true).second) {
            const Fiber& f = fiber(w);
            if (f.sources.size() != f.source_dim) return false;
        }
    }
    return true;
}

HVector alpha_plus() {
    const Cyclotomic r = Cyclotomic::sqrt2().inverse();
    return {{0, r}, {1, -Cyclotomic::i() * r}};
}

HVector alpha_minus() {
    const Cyclotomic r = Cyclotomic::sqrt2().inverse();
    return {{0, r}, {1, Cyclotomic::i() * r}};
}

LatticePtr build_boson_lattice() { return build_VL(IntegralLattice(IntMat{{1}})); }

LinearMapPtr build_phi(const LatticePtr& source, const SpacePtr& target, Rat cutoff) {
    if (source->lattice().gram() != IntMat{{1}}) throw std::invalid_argument("build_phi: source must be V_{Z alpha}, <alpha, alpha> = 1");
    if (target->num_generators() != 2) throw std::invalid_argument("build_phi: target must have two fermions");
    const SpacePtr vfer = target;
    const SuperVector x = vfer->apply(alpha_plus(), Rat(-1, 2), vfer->apply(alpha_minus(), Rat(-1, 2), vfer->vacuum()));
    auto rule = [vfer, x](const Monomial& m) {
        const std::int64_t n = m.sector.empty() ? 0 : m.sector.front();
        const HVector h = n >= 0 ? alpha_plus() : alpha_minus();
        SuperVector s = vfer->vacuum();
        for (std::int64_t j = 1; j <= (n >= 0 ? n : -n); ++j) s = vfer->apply(h, Rat(1, 2) - Rat(j), s);
        // Heisenberg modes commute; apply the shallowest first.
        for (auto it = m.word.rbegin(); it != m.word.rend(); ++it) s = untwisted_mode(*vfer, x, it->level, s);
        return s;
    };
    return std::make_shared<const GradedLinearMap>(source->space_ptr(), target, cutoff, rule);
}

LinearMapPtr build_phi(Rat cutoff) { return build_phi(build_boson_lattice(), build_Vfer(2), cutoff); }

CheckResult verify_phi_intertwines(const GradedLinearMap& phi, const LatticeAlgebra& lattice, Rat w_max,
                                   const ModeWindow& window) {
    CheckResult r;
    const auto basis = lattice.space().basis_up_to(w_max);
    const auto modes = window.values();
    for (const auto& um : basis) {
        const SuperVector u(um, Cyclotomic(1));
        const SuperVector pu = phi(u);
        for (const auto& vm : basis) {
            const SuperVector v(vm, Cyclotomic(1));
            const SuperVector pv = phi(v);
            for (Rat n : modes) {
                ++r.checked;
                if (phi(lattice.mode(u, n, v)) != untwisted_mode(phi.target(), pu, n, pv)) {
                    r.fail("phi(u_n v) != phi(u)_n phi(v): " + witness(lattice.space(), lattice.space(), u, n, v));
                }
            }
        }
    }
    return r;
}

IsometryTwist transported_twist(const IntegralLattice& lattice, Transport which) {
    // u(alpha) = eta0^3 = -i or eta0^1 = i, with eta0 = eta = i.
    return IsometryTwist(lattice, {{-1}}, 4, 1, {which == Transport::perm ? 3 : 1});
}

SuperVector transported_automorphism(const LatticeAlgebra& lattice, Transport which, const SuperVector& x) {
    return lift_action(lattice, transported_twist(lattice.lattice(), which), x);
}

SuperVector fermion_automorphism(const FockSpace& vfer, Transport which, const SuperVector& x) {
    const SuperVector y = signed_permutation_action(vfer, SignedPermutation::transposition(2, 0, 1), x);
    return which == Transport::perm ? y : vfer.parity_map(y);
}

CheckResult verify_transport(const GradedLinearMap& phi, const LatticeAlgebra& lattice, Rat w_max, const ModeWindow& window) {
    CheckResult r;
    const FockSpace& vl = lattice.space();
    const auto basis = vl.basis_up_to(w_max);
    for (Transport which : {Transport::perm, Transport::sigma_perm}) {
        const std::string label = which == Transport::perm ? "(1 2)" : "sigma(1 2)";
        auto g = [&](const SuperVector& x) { return transported_automorphism(lattice, which, x); };
        for (const auto& m : basis) {
            const SuperVector x(m, Cyclotomic(1));
            ++r.checked;
            const auto back = phi.preimage(fermion_automorphism(phi.target(), which, phi(x)));
            if (!back) {
                r.fail(label + ": image of " + vl.format(x) + " left the image of phi");
                continue;
            }
            if (*back != g(x)) r.fail(label + ": transport differs on " + vl.format(x));
            if (g(g(x)) != x) r.fail(label + ": not an involution on " + vl.format(x));
        }
        if (g(vl.vacuum()) != vl.vacuum()) r.fail(label + ": vacuum not fixed");
        const SuperVector omega = lattice.conformal_vector();
        if (g(omega) != omega) r.fail(label + ": omega not fixed");
        for (const auto& um : basis) {
            const SuperVector u(um, Cyclotomic(1));
            const SuperVector gu = g(u);
            for (const auto& wm : basis) {
                const SuperVector w(wm, Cyclotomic(1));
                const SuperVector ginv_w = g(w);
                for (Rat n : window.values()) {
                    ++r.checked;
                    if (g(lattice.mode(u, n, ginv_w)) != lattice.mode(gu, n, w)) {
                        r.fail(label + ": automorphism law fails, " + witness(vl, vl, u, n, w));
                    }
                }
            }
        }
    }
    for (const auto& m : basis) {
        const SuperVector x(m, Cyclotomic(1));
        ++r.checked;
        if (transported_automorphism(lattice, Transport::sigma_perm, x) !=
            vl.parity_map(transported_automorphism(lattice, Transport::perm, x))) {
            r.fail("sigma nu-hat != sigma_V nu-hat on " + vl.format(x));
        }
    }
    return r;
}

CheckResult module_correspondence_check(const VertexModule& a, const VertexModule& b,
                                        const std::function<SuperVector(const SuperVector&)>& transport,
                                        const SuperVector& generator, Rat w_max, Rat probe_weight,
                                        const ModeWindow& window) {
    const FockSpace& sa = a.space();
    const FockSpace& sb = b.space();
    const Rat lowest = sa.weight_offset();
    const Rat top = lowest + w_max;
    if (sb.weight_offset() != lowest) throw std::invalid_argument("module_correspondence_check: lowest weights differ");
    const auto weights = a.weights_up_to(top);
    std::map<Rat, std::size_t> dims;
    for (Rat w : weights) {
        dims[w] = a.weight_basis(w).size();
        if (dims[w] != b.weight_basis(w).size()) {
            throw std::invalid_argument("module_correspondence_check: graded dimensions differ at weight " + w.str());
        }
    }
    for (Rat w : b.weights_up_to(top)) {
        if (!dims.contains(w) && !b.weight_basis(w).empty()) {
            throw std::invalid_argument("module_correspondence_check: graded dimensions differ at weight " + w.str());
        }
    }
    const auto a0 = a.weight_basis(lowest);
    const auto b0 = b.weight_basis(lowest);
    if (a0.size() != 1) throw std::invalid_argument("module_correspondence_check: lowest weight space is not one-dimensional");

    struct Level {
        SpanBasis span;
        std::vector<SuperVector> images;
    };
    std::map<Rat, Level> levels;
    CheckResult r;
    const Rat gen_weight = a.algebra().max_weight(generator);
    const SuperVector tgen = transport(generator);
    const auto modes = window.values();

    levels[lowest].span.insert(a0.front());
    levels[lowest].images.push_back(b0.front());
    std::deque<std::pair<SuperVector, SuperVector>> queue{{a0.front(), b0.front()}};
    while (!queue.empty()) {
        const auto [x, y] = queue.front();
        queue.pop_front();
        const Rat wx = weight_of(sa, x);
        for (Rat n : modes) {
            const Rat w = wx + gen_weight - n - Rat(1);
            if (w <= wx || w > top) continue;
            SuperVector x2 = a.mode(generator, n, x);
            if (x2.is_zero()) continue;
            SuperVector y2 = b.mode(tgen, n, y);
            Level& lv = levels[w];
            if (const auto coords = lv.span.coordinates(x2)) {
                ++r.checked;
                if (combine(lv.images, *coords) != y2) r.fail("generator relation not matched at weight " + w.str());
            } else {
                lv.span.insert(x2);
                lv.images.push_back(y2);
                queue.emplace_back(std::move(x2), std::move(y2));
            }
        }
    }
    for (const auto& [w, d] : dims) {
        const std::size_t got = levels.contains(w) ? levels[w].span.size() : 0;
        if (got != d) r.fail("generator does not span weight " + w.str());
    }
    if (!r.pass) return r;

    auto f = [&](const SuperVector& v) -> std::optional<SuperVector> {
        SuperVector out;
        for (const auto& [w, part] : by_weight(sa, v)) {
            const auto it = levels.find(w);
            if (it == levels.end()) return std::nullopt;
            const auto coords = it->second.span.coordinates(part);
            if (!coords) return std::nullopt;
            out += combine(it->second.images, *coords);
        }
        return out;
    };

    const FockSpace& alg = a.algebra();
    for (const auto& um : alg.basis_up_to(probe_weight)) {
        const SuperVector u(um, Cyclotomic(1));
        const SuperVector tu = transport(u);
        const Rat wu = alg.weight(um);
        for (const auto& [w, lv] : levels) {
            for (std::size_t i = 0; i < lv.span.size(); ++i) {
                const SuperVector& x = lv.span.vectors()[i];
                const SuperVector& y = lv.images[i];
                for (Rat n : modes) {
                    if (w + wu - n - Rat(1) > top) continue;
                    ++r.checked;
                    const auto lhs = f(a.mode(u, n, x));
                    if (!lhs || *lhs != b.mode(tu, n, y)) r.fail("intertwining defect: " + witness(alg, sa, u, n, x));
                }
            }
        }
    }
    return r;
}

bool EvidenceReport::consistent() const {
    for (const auto& i : items) {
        if (!i.consistent) return false;
    }
    return !items.empty();
}

namespace {

std::string series_detail(const PuiseuxSeries& lhs, const PuiseuxSeries& rhs, Rat t) {
    if (series_eq(lhs, rhs, t)) return "equal up to q^" + t.str();
    return "left:\n" + lhs.truncated(t).text() + "right:\n" + rhs.truncated(t).text();
}

EvidenceItem series_item(std::string name, const PuiseuxSeries& lhs, const PuiseuxSeries& rhs, Rat t) {
    return {std::move(name), series_eq(lhs, rhs, t), series_detail(lhs, rhs, t)};
}

void require_even(int k) {
    if (k < 2 || k % 2 != 0) throw std::invalid_argument("odd k out of scope");
}

// Finds, for each lattice module, the fermionic half it is isomorphic to.
EvidenceItem pair_modules(const std::string& label, const LatticeAlgebra& lattice, const LinearMapPtr& phi,
                          const std::vector<ModulePtr>& lattice_side, const std::vector<std::string>& lattice_names,
                          const ParityUnstablePair& fermion_side, Rat w_max, const ModeWindow& window) {
    const SuperVector gen = lattice.space().state({{0, Rat(-1)}}, {0});
    auto transport = [&](const SuperVector& u) { return (*phi)(u); };
    const std::vector<std::pair<std::string, ModulePtr>> halves{{"+", fermion_side.plus}, {"-", fermion_side.minus}};
    EvidenceItem item{label, true, ""};
    std::vector<bool> used(halves.size(), false);
    for (std::size_t i = 0; i < lattice_side.size(); ++i) {
        bool found = false;
        for (std::size_t j = 0; j < halves.size() && !found; ++j) {
            if (used[j]) continue;
            CheckResult r;
            try {
                r = module_correspondence_check(*lattice_side[i], *halves[j].second, transport, gen, w_max, w_max, window);
            } catch (const std::invalid_argument&) {
                continue;
            }
            if (r.pass) {
                found = used[j] = true;
                item.detail += lattice_names[i] + " ~ " + fermion_side.parent->name() + "^" + halves[j].first + " (" +
                               std::to_string(r.checked) + " mode checks); ";
            }
        }
        if (!found) {
            item.consistent = false;
            item.detail += lattice_names[i] + " has no fermionic partner; ";
        }
    }
    return item;
}

}  // namespace

EvidenceReport conjecture1_evidence(int k, Rat trunc) {
    require_even(k);
    EvidenceReport rep{1, k, {}};
    const auto mg = build_perm_twisted(k);
    const auto ms = build_parity_twisted(1);
    const PuiseuxSeries lhs = mg->graded_dimension(trunc);
    const PuiseuxSeries rhs = substitute_root(ms->graded_dimension(trunc * Rat(k)), k);
    rep.items.push_back(series_item("dim_q M_g = dim_{q^{1/k}} M_sigma(d=1)", lhs, rhs, trunc));
    const auto split = split_parity_unstable(mg);
    rep.items.push_back(series_item("dim_q M_g^+ = dim_q M_g / 2", split.plus->graded_dimension(trunc) * Cyclotomic(2), lhs, trunc));
    rep.items.push_back(series_item("dim_q M_g^- = dim_q M_g / 2", split.minus->graded_dimension(trunc) * Cyclotomic(2), lhs, trunc));
    return rep;
}

TensorState four_cycle_transport(const GradedLinearMap& phi, const Monomial& x, const Monomial& y) {
    const auto v4 = build_Vfer(4);
    const SuperVector px = phi.image(x);
    const SuperVector py = phi.image(y);
    SuperVector t;
    for (const auto& [mx, cx] : px.terms()) {
        for (const auto& [my, cy] : py.terms()) {
            Monomial m = mx;
            for (Mode md : my.word) {
                md.gen += 2;
                m.word.push_back(md);
            }
            t.add(std::move(m), cx * cy);
        }
    }
    const SuperVector moved = signed_permutation_action(*v4, SignedPermutation::cycle(4), t);
    TensorState out;
    for (const auto& [m, c] : moved.terms()) {
        Monomial left, right;
        for (Mode md : m.word) {
            if (md.gen < 2) {
                left.word.push_back(md);
            } else {
                md.gen -= 2;
                right.word.push_back(md);
            }
        }
        const auto pl = phi.preimage(SuperVector(left, Cyclotomic(1)));
        const auto pr = phi.preimage(SuperVector(right, Cyclotomic(1)));
        if (!pl || !pr) throw std::domain_error("four_cycle_transport: state outside the image of phi");
        for (const auto& [ml, cl] : pl->terms()) {
            for (const auto& [mr, cr] : pr->terms()) {
                auto& slot = out[{ml, mr}];
                slot += c * cl * cr;
                if (slot.is_zero()) out.erase({ml, mr});
            }
        }
    }
    return out;
}

std::string format_tensor(const FockSpace& space, const TensorState& t) {
    if (t.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [xy, c] : t) {
        if (!first) os << " + ";
        first = false;
        os << "(" << c.short_str() << ") " << space.format(xy.first) << " (x) " << space.format(xy.second);
    }
    return os.str();
}

EvidenceReport conjecture2_evidence(int k, Rat w_max, const ModeWindow& window) {
    require_even(k);
    EvidenceReport rep{2, k, {}};
    const LatticePtr vl = build_boson_lattice();
    if (k == 2) {
        const auto mg = build_perm_twisted(2);
        const auto phi = build_phi(vl, mg->algebra_ptr(), w_max);
        const CheckResult tr = verify_transport(*phi, *vl, w_max, {Rat(-3), Rat(3), Rat(1)});
        rep.items.push_back({"transported (1 2) and sigma(1 2) are lattice lifts", tr.pass,
                             std::to_string(tr.checked) + " checks" +
                                 (tr.witnesses.empty() ? std::string() : "; first failure: " + tr.witnesses.front())});
        for (Transport which : {Transport::perm, Transport::sigma_perm}) {
            const bool perm = which == Transport::perm;
            const auto tw = transported_twist(vl->lattice(), which);
            const auto chis = enumerate_chi(vl->lattice(), tw);
            std::vector<ModulePtr> mods;
            std::vector<std::string> names;
            for (std::size_t i = 0; i < chis.size(); ++i) {
                names.push_back(std::string(perm ? "M" : "M^sigma") + (i == 0 ? "_+" : "_-"));
                mods.push_back(build_twisted_lattice_module(vl, tw, chis[i], names.back()));
            }
            const auto fer = split_parity_unstable(perm ? mg : build_sigma_transposition_twisted());
            const Rat t = w_max + Rat(1);
            for (std::size_t i = 0; i < mods.size(); ++i) {
                rep.items.push_back(series_item("dim_q " + names[i] + " = dim_q " + fer.parent->name() + "^+-",
                                                mods[i]->graded_dimension(t), fer.plus->graded_dimension(t), t));
            }
            rep.items.push_back(pair_modules(std::string(perm ? "lattice" : "sigma-lattice") + " modules match " +
                                                 fer.parent->name() + " halves",
                                             *vl, phi, mods, names, fer, w_max, window));
        }
        return rep;
    }
    if (k == 4) {
        const auto phi = build_phi(vl, build_Vfer(2), Rat(2));
        const FockSpace& s = vl->space();
        const Monomial a1 = s.state({{0, Rat(-1)}}, {0}).terms().begin()->first;
        const TensorState got = four_cycle_transport(*phi, a1, s.vacuum_monomial({0}));
        TensorState expect;
        const Cyclotomic half(mpq_class(1, 2));
        for (std::int64_t p : {1, -1}) {
            for (std::int64_t q : {1, -1}) expect[{s.vacuum_monomial({p}), s.vacuum_monomial({q})}] = q == 1 ? half : -half;
        }
        rep.items.push_back({"(1 2 3 4) transport of alpha(-1)1 (x) 1", got == expect, format_tensor(s, got)});
        bool mixed = false;
        for (const auto& [xy, c] : got) {
            if (xy.first.sector != IntVec{0} || xy.second.sector != IntVec{0}) mixed = true;
        }
        rep.items.push_back({"naive transport is not multiplicative on sector labels", mixed,
                             mixed ? "sector (0,0) is sent outside sector (0,0), so no lift of an isometry of Z^2 matches it "
                                     "in these coordinates"
                                   : "image stays in sector (0,0)"});
        return rep;
    }
    throw std::invalid_argument("conjecture2_evidence: k must be 2 or 4");
}

}  // namespace vosa
