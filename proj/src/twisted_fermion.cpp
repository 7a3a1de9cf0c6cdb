#include "vosa/twisted_fermion.hpp"

#include <stdexcept>

namespace vosa {

namespace {

Cyclotomic sign_of(std::int64_t e) { return Cyclotomic((e % 2 == 0) ? 1L : -1L); }

Rat frac(Rat x) { return x - Rat(x.floor()); }

}  // namespace

IterateModule::IterateModule(std::string name, SpacePtr algebra, SpacePtr space,
                             std::vector<std::vector<FieldComponent>> fields)
    : name_(std::move(name)), algebra_(std::move(algebra)), space_(std::move(space)), fields_(std::move(fields)) {
    if (static_cast<int>(fields_.size()) != algebra_->num_generators()) {
        throw std::invalid_argument("IterateModule: one field per algebra generator required");
    }
    for (auto& comps : fields_) {
        for (auto& c : comps) c.shift = frac(c.shift);
    }
}

SuperVector IterateModule::field_mode(int generator, Rat level, const SuperVector& w) const {
    SuperVector out;
    for (const auto& c : field(generator)) out += space_->apply(c.h, level, w);
    return out;
}

SuperVector IterateModule::monomial_mode(const Monomial& v, Rat n, const SuperVector& w) const {
    SuperVector out;
    for (const auto& [m, c] : w.terms()) out += mode_on_monomial(v, n, m) * c;
    return out;
}

SuperVector IterateModule::mode_on_monomial(const Monomial& v, Rat s, const Monomial& w) const {
    if (v.word.empty()) return s == Rat(-1) ? SuperVector(w, Cyclotomic(1)) : SuperVector();
    const Rat h_min = space_->weight_offset();
    const Rat wt_w = space_->weight(w);
    if (algebra_->weight(v) + wt_w - s - Rat(1) < h_min) return {};

    auto key = std::make_tuple(v, s, w);
    {
        std::lock_guard<std::mutex> lock(cache_mutex_);
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
    }

    // v = a_q u with a = first(-1/2)|0>, q = -n - 1/2 for first = a(-n).
    const Mode first = v.word.front();
    Monomial u = v;
    u.word.erase(u.word.begin());
    const Rat q = first.level - Rat(1, 2);
    const Rat wt_u = algebra_->weight(u);
    const Cyclotomic u_sign = sign_of(algebra_->parity(u));
    const SuperVector wv(w, Cyclotomic(1));

    SuperVector out;
    for (const auto& comp : field(first.gen)) {
        const Rat rp = comp.shift;
        for (std::int64_t i = 0;; ++i) {
            const Rat j = q + Rat(i);
            if (j > wt_u - Rat(1, 2)) break;
            const Cyclotomic bi(binom(-rp, i));
            if (bi.is_zero()) break;
            const std::int64_t jj = j.to_int();
            // sum_l binom(j,l) (-1)^l A_{j-l} u_{t1} w, t1 = s - r' - i + l
            for (std::int64_t l = 0;; ++l) {
                const Rat t1 = s - rp - Rat(i) + Rat(l);
                if (t1 > wt_u + wt_w - Rat(1) - h_min) break;
                SuperVector x;
                for (const auto& [m, c] : wv.terms()) x += mode_on_monomial(u, t1, m) * c;
                if (x.is_zero()) continue;
                SuperVector y = space_->apply(comp.h, j - Rat(l) + Rat(1, 2) + rp, x);
                if (y.is_zero()) continue;
                out += y * (bi * Cyclotomic(binom(j, l)) * sign_of(l));
            }
            // - (-1)^{|u|} sum_l binom(j,l) (-1)^{j-l} u_{t2} A_l w, t2 = s - r' - i + j - l
            for (std::int64_t l = 0;; ++l) {
                const Rat level = Rat(l) + Rat(1, 2) + rp;
                if (level > wt_w - h_min) break;
                SuperVector aw = space_->apply(comp.h, level, wv);
                if (aw.is_zero()) continue;
                const Rat t2 = s - rp - Rat(i) + j - Rat(l);
                SuperVector y;
                for (const auto& [m, c] : aw.terms()) y += mode_on_monomial(u, t2, m) * c;
                if (y.is_zero()) continue;
                out -= y * (u_sign * bi * Cyclotomic(binom(j, l)) * sign_of(jj - l));
            }
        }
    }

    std::lock_guard<std::mutex> lock(cache_mutex_);
    cache_.emplace(std::move(key), out);
    return out;
}

IteratePtr build_untwisted_iterate(int d) {
    SpacePtr v = build_Vfer(d);
    std::vector<std::vector<FieldComponent>> fields;
    for (int j = 0; j < d; ++j) fields.push_back({FieldComponent{HVector{{j, Cyclotomic(1)}}, Rat(0)}});
    return std::make_shared<const IterateModule>(v->name() + "(iterate)", v, v, fields);
}

IteratePtr build_parity_twisted(int d) {
    if (d < 1) throw std::invalid_argument("build_parity_twisted: d must be positive");
    const int l = d / 2;
    const bool odd = d % 2 == 1;
    std::vector<Generator> gens;
    for (int j = 1; j <= l; ++j) gens.push_back({"b+" + std::to_string(j), Statistics::fermionic, Rat(0), ZeroMode::create});
    for (int j = 1; j <= l; ++j) gens.push_back({"b-" + std::to_string(j), Statistics::fermionic, Rat(0), ZeroMode::annihilate});
    if (odd) gens.push_back({"eps", Statistics::fermionic, Rat(0), ZeroMode::clifford});
    const std::size_t n = gens.size();
    std::vector<std::vector<Cyclotomic>> form(n, std::vector<Cyclotomic>(n));
    for (std::size_t j = 0; j < static_cast<std::size_t>(l); ++j) {
        form[j][j + static_cast<std::size_t>(l)] = Cyclotomic(1);
        form[j + static_cast<std::size_t>(l)][j] = Cyclotomic(1);
    }
    if (odd) form[n - 1][n - 1] = Cyclotomic(2);
    auto space = std::make_shared<const FockSpace>("M_sigma(d=" + std::to_string(d) + ")", gens, form, Rat(d, 16),
                                                   Rat(d, 2));

    // a^{(j)} = (b+ + b-)/sqrt2, a^{(j+l)} = -i (b+ - b-)/sqrt2, a^{(d)} = eps/sqrt2.
    const Cyclotomic inv_sqrt2 = Cyclotomic::sqrt2() * Cyclotomic(mpq_class(1, 2));
    const Cyclotomic i = Cyclotomic::i();
    std::vector<std::vector<FieldComponent>> fields(static_cast<std::size_t>(d));
    for (int j = 0; j < l; ++j) {
        fields[static_cast<std::size_t>(j)] = {FieldComponent{HVector{{j, inv_sqrt2}, {j + l, inv_sqrt2}}, Rat(1, 2)}};
        fields[static_cast<std::size_t>(j + l)] = {
            FieldComponent{HVector{{j, -i * inv_sqrt2}, {j + l, i * inv_sqrt2}}, Rat(1, 2)}};
    }
    if (odd) fields[static_cast<std::size_t>(d - 1)] = {FieldComponent{HVector{{2 * l, inv_sqrt2}}, Rat(1, 2)}};
    return std::make_shared<const IterateModule>(space->name(), build_Vfer(d), space, fields);
}

IteratePtr build_perm_twisted(int k) {
    if (k < 2 || k % 2 != 0) throw std::invalid_argument("build_perm_twisted: k must be even and >= 2");
    std::vector<Generator> gens{{"eps", Statistics::fermionic, Rat(0), ZeroMode::clifford}};
    for (int r = 1; r < k; ++r) gens.push_back({"e" + std::to_string(r), Statistics::fermionic, Rat(r, k), ZeroMode::none});
    const auto n = static_cast<std::size_t>(k);
    std::vector<std::vector<Cyclotomic>> form(n, std::vector<Cyclotomic>(n));
    form[0][0] = Cyclotomic(2);
    for (std::size_t r = 1; r < n; ++r) form[r][n - r] = Cyclotomic(mpq_class(1, k));
    auto space = std::make_shared<const FockSpace>("M_g(k=" + std::to_string(k) + ")", gens, form,
                                                   Rat(k * k + 2, 48 * k), Rat(k, 2));

    // a^{(i)} = (-1)^{i-1} sum_r eta^{-r(i-1)} e_r with e_0 = eps / sqrt(2k).
    const Cyclotomic inv_root = Cyclotomic::sqrt_int(2L * k).inverse();
    std::vector<std::vector<FieldComponent>> fields(n);
    for (int i = 0; i < k; ++i) {
        const Cyclotomic s = sign_of(i);
        auto& comps = fields[static_cast<std::size_t>(i)];
        comps.push_back(FieldComponent{HVector{{0, s * inv_root}}, Rat(1, 2)});
        for (int r = 1; r < k; ++r) {
            comps.push_back(FieldComponent{HVector{{r, s * Cyclotomic::root(k, -static_cast<long>(r) * i)}},
                                           Rat(r, k) + Rat(1, 2)});
        }
    }
    return std::make_shared<const IterateModule>(space->name(), build_Vfer(k), space, fields);
}

IteratePtr build_sigma_transposition_twisted() {
    const auto base = build_perm_twisted(2);
    std::vector<std::vector<FieldComponent>> fields{base->field(0), base->field(1)};
    for (auto& c : fields[1]) {
        for (auto& [g, x] : c.h) x = -x;
    }
    return std::make_shared<const IterateModule>("M_{sigma(1 2)}", base->algebra_ptr(), base->space_ptr(), fields);
}

SuperVector L_sigma(const IterateModule& m, std::int64_t mm, const SuperVector& w) {
    const FockSpace& s = m.space();
    const int d = m.algebra().num_generators();
    const Rat budget = s.max_weight(w) - s.weight_offset();
    const Rat half_m(mm, 2);
    SuperVector out;
    for (int j = 0; j < d; ++j) {
        const HVector& h = m.field(j).front().h;
        // n > -m/2 and the right factor must not annihilate everything.
        for (std::int64_t n = (-half_m).floor() + 1; Rat(n + mm) <= budget; ++n) {
            const Rat c = Rat(n) + half_m;
            if (c.is_zero()) continue;
            SuperVector x = s.apply(h, Rat(n + mm), w);
            if (x.is_zero()) continue;
            out += s.apply(h, Rat(-n), x) * Cyclotomic(c);
        }
    }
    if (mm == 0) out += w * Cyclotomic(s.weight_offset());
    return out;
}

SuperVector L_g(const IterateModule& m, int k, std::int64_t mm, const SuperVector& w) {
    const FockSpace& s = m.space();
    const Rat budget = s.max_weight(w) - s.weight_offset();
    const Rat half_m(mm, 2);
    const Cyclotomic inv_root = Cyclotomic::sqrt_int(2L * k).inverse();
    auto e = [&](int r) {
        r = ((r % k) + k) % k;
        return r == 0 ? HVector{{0, inv_root}} : HVector{{r, Cyclotomic(1)}};
    };
    SuperVector out;
    for (int r = 0; r < k; ++r) {
        const Rat rk(r, k);
        for (std::int64_t n = (-half_m).floor() + 1; Rat(n + mm) - rk <= budget; ++n) {
            const Rat c = Rat(n) + half_m - rk;
            if (c.is_zero()) continue;
            SuperVector x = s.apply(e(-r), Rat(n + mm) - rk, w);
            if (x.is_zero()) continue;
            out += s.apply(e(r), Rat(-n) + rk, x) * Cyclotomic(c * Rat(k));
        }
    }
    if (mm == 0) out += w * Cyclotomic(s.weight_offset());
    return out;
}

SuperVector clifford_involution(const FockSpace& space, const SuperVector& v) {
    const int eps = space.find_generator("eps");
    if (eps < 0 || space.generator(eps).zero != ZeroMode::clifford) {
        throw std::domain_error("parity stable: no Clifford zero mode to split by");
    }
    const Mode e0{eps, Rat(0)};
    SuperVector out;
    for (const auto& [m, c] : v.terms()) {
        int pw = space.parity(m);
        for (const auto& md : m.word) {
            if (md == e0) pw ^= 1;
        }
        out += space.apply(e0, SuperVector(m, c)) * sign_of(pw);
    }
    return out;
}

ParityUnstablePair split_parity_unstable(const std::shared_ptr<const IterateModule>& m) {
    const FockSpace& space = m->space();
    clifford_involution(space, space.vacuum());  // throws when there is nothing to split by
    const Cyclotomic half(mpq_class(1, 2));
    auto proj = [&space, half](int sign) {
        return [&space, half, sign](const SuperVector& v) {
            SuperVector q = clifford_involution(space, v);
            return (sign > 0 ? v + q : v - q) * half;
        };
    };
    ParityUnstablePair p;
    p.parent = m;
    p.plus = std::make_shared<const SubModule>(m, proj(1), m->name() + "^+");
    p.minus = std::make_shared<const SubModule>(m, proj(-1), m->name() + "^-");
    return p;
}

ModulePtr flip_module(ModulePtr m) { return std::make_shared<const FlipModule>(std::move(m)); }

}  // namespace vosa
