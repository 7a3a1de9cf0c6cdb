#include "vosa/free_fermion.hpp"

#include <stdexcept>

#include "vosa/linalg.hpp"

namespace vosa {

SpacePtr build_Vfer(int d) {
    if (d < 1) throw std::invalid_argument("build_Vfer: d must be positive");
    std::vector<Generator> gens;
    std::vector<std::vector<Cyclotomic>> form(static_cast<std::size_t>(d), std::vector<Cyclotomic>(static_cast<std::size_t>(d)));
    for (int j = 0; j < d; ++j) {
        gens.push_back({"a" + std::to_string(j + 1), Statistics::fermionic, Rat(1, 2), ZeroMode::none});
        form[static_cast<std::size_t>(j)][static_cast<std::size_t>(j)] = Cyclotomic(1);
    }
    return std::make_shared<const FockSpace>("Vfer^" + std::to_string(d), gens, form, Rat(0), Rat(d, 2));
}

SpacePtr build_Vfer_polarized() {
    std::vector<Generator> gens{{"a+", Statistics::fermionic, Rat(1, 2), ZeroMode::none},
                                {"a-", Statistics::fermionic, Rat(1, 2), ZeroMode::none}};
    std::vector<std::vector<Cyclotomic>> form{{Cyclotomic(0), Cyclotomic(1)}, {Cyclotomic(1), Cyclotomic(0)}};
    return std::make_shared<const FockSpace>("Vfer^2(null basis)", gens, form, Rat(0), Rat(1));
}

SuperVector conformal_vector(const FockSpace& v) {
    const int n = v.num_generators();
    CycMatrix b(static_cast<std::size_t>(n), std::vector<Cyclotomic>(static_cast<std::size_t>(n)));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) b[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = v.form(i, j);
    }
    const CycMatrix binv = inverse(b);
    SuperVector omega;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const Cyclotomic& c = binv[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
            if (c.is_zero()) continue;
            omega += v.state({{i, Rat(-3, 2)}, {j, Rat(-1, 2)}}) * (c * Cyclotomic(mpq_class(1, 2)));
        }
    }
    return omega;
}

SuperVector untwisted_mode(const FockSpace& v_space, const Monomial& v, Rat n, const SuperVector& w) {
    SuperVector out;
    if (w.is_zero()) return out;
    const auto& fields = v.word;
    if (fields.empty()) return n == Rat(-1) ? w : out;
    for (const auto& f : fields) {
        if (!(f.level + Rat(1, 2)).is_integer() || f.level >= Rat(0)) {
            throw std::invalid_argument("untwisted_mode: expects half-integer creation modes");
        }
    }
    const Rat total = n + Rat(1) - v_space.weight(v) + v_space.weight_offset();
    const Rat budget = v_space.max_weight(w) - v_space.weight_offset();
    const Rat lo = total - budget;
    const Rat hi = budget;
    const std::size_t r = fields.size();

    std::vector<Rat> levels(r);
    auto rec = [&](auto&& self, std::size_t i, Rat rest) -> void {
        const std::size_t left = r - i;
        if (left == 1) {
            if (rest < lo || rest > hi || !(rest + Rat(1, 2)).is_integer()) return;
            levels[i] = rest;
            Cyclotomic coeff(1);
            for (std::size_t j = 0; j < r; ++j) {
                // d^{(m)} x^{-l-1/2} = binom(-l-1/2, m) x^{-l-1/2-m}, m = n_j - 1/2
                const Rat m = -fields[j].level - Rat(1, 2);
                coeff *= Cyclotomic(binom(-levels[j] - Rat(1, 2), m.to_int()));
                if (coeff.is_zero()) return;
            }
            std::vector<Mode> modes(r);
            for (std::size_t j = 0; j < r; ++j) modes[j] = Mode{fields[j].gen, levels[j]};
            const int sign = normal_order_sign(v_space, modes);
            SuperVector x = w;
            for (auto it = modes.rbegin(); it != modes.rend() && !x.is_zero(); ++it) x = v_space.apply(*it, x);
            out += x * (coeff * Cyclotomic(static_cast<long>(sign)));
            return;
        }
        // First admissible half-integer >= lo.
        Rat start = Rat((lo - Rat(1, 2)).ceil()) + Rat(1, 2);
        for (Rat l = start; l <= hi; l += Rat(1)) {
            Rat remaining = rest - l;
            const Rat k(static_cast<std::int64_t>(left - 1));
            if (remaining < lo * k || remaining > hi * k) continue;
            levels[i] = l;
            self(self, i + 1, remaining);
        }
    };
    rec(rec, 0, total);
    return out;
}

SuperVector untwisted_mode(const FockSpace& v_space, const SuperVector& v, Rat n, const SuperVector& w) {
    SuperVector out;
    for (const auto& [m, c] : v.terms()) out += untwisted_mode(v_space, m, n, w) * c;
    return out;
}

SuperVector virasoro_mode(const VertexModule& m, Rat mm, const SuperVector& w) {
    return m.mode(conformal_vector(m.algebra()), mm + Rat(1), w);
}

SignedPermutation SignedPermutation::cycle(int k) {
    SignedPermutation g;
    g.image.resize(static_cast<std::size_t>(k));
    for (int j = 0; j < k; ++j) g.image[static_cast<std::size_t>(j)] = (j + k - 1) % k;
    return g;
}

SignedPermutation SignedPermutation::transposition(int k, int a, int b) {
    SignedPermutation g;
    g.image.resize(static_cast<std::size_t>(k));
    for (int j = 0; j < k; ++j) g.image[static_cast<std::size_t>(j)] = j;
    std::swap(g.image[static_cast<std::size_t>(a)], g.image[static_cast<std::size_t>(b)]);
    return g;
}

SignedPermutation SignedPermutation::then(const SignedPermutation& g) const {
    SignedPermutation r;
    r.image.resize(image.size());
    for (std::size_t j = 0; j < image.size(); ++j) r.image[j] = g.image[static_cast<std::size_t>(image[j])];
    return r;
}

SuperVector map_generators(const FockSpace& v_space, const std::vector<HVector>& images, const SuperVector& v) {
    if (static_cast<int>(images.size()) != v_space.num_generators()) {
        throw std::invalid_argument("map_generators: one image per generator required");
    }
    SuperVector out;
    for (const auto& [m, c] : v.terms()) {
        SuperVector x = v_space.vacuum(m.sector);
        for (auto it = m.word.rbegin(); it != m.word.rend() && !x.is_zero(); ++it) {
            x = v_space.apply(images[static_cast<std::size_t>(it->gen)], it->level, x);
        }
        out += x * c;
    }
    return out;
}

SuperVector signed_permutation_action(const FockSpace& v_space, const SignedPermutation& g, const SuperVector& v) {
    std::vector<HVector> images;
    for (int j : g.image) images.push_back(HVector{{j, Cyclotomic(1)}});
    return map_generators(v_space, images, v);
}

SuperVector parity_map(const FockSpace& space, const SuperVector& v) { return space.parity_map(v); }

}  // namespace vosa
