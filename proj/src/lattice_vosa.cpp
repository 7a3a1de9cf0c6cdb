#include "vosa/lattice_vosa.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <numeric>
#include <stdexcept>

#include "vosa/linalg.hpp"

namespace vosa {

namespace {

std::int64_t mod(std::int64_t a, std::int64_t m) {
    std::int64_t r = a % m;
    return r < 0 ? r + m : r;
}

std::int64_t dot(const IntVec& a, const IntVec& b) {
    std::int64_t s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

IntVec add(IntVec a, const IntVec& b) {
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
    return a;
}

IntVec sub(IntVec a, const IntVec& b) {
    for (std::size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
    return a;
}

IntVec neg(IntVec a) {
    for (auto& x : a) x = -x;
    return a;
}

bool is_zero_vec(const IntVec& a) {
    return std::all_of(a.begin(), a.end(), [](std::int64_t x) { return x == 0; });
}

std::int64_t det_int(IntMat m) {
    // Bareiss fraction-free elimination.
    const std::size_t n = m.size();
    if (n == 0) return 1;
    std::int64_t sign = 1;
    std::int64_t prev = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m[k][k] == 0) {
            std::size_t p = k + 1;
            while (p < n && m[p][k] == 0) ++p;
            if (p == n) return 0;
            std::swap(m[p], m[k]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
        }
        prev = m[k][k];
    }
    return sign * m[n - 1][n - 1];
}

// Basis of the subgroup generated by gens (row-style Hermite reduction).
IntMat lattice_basis(std::vector<IntVec> gens, std::size_t rank) {
    IntMat basis;
    std::size_t col = 0;
    while (!gens.empty() && col < rank) {
        // Euclid on column col.
        for (;;) {
            std::size_t best = gens.size();
            for (std::size_t i = 0; i < gens.size(); ++i) {
                if (gens[i][col] != 0 && (best == gens.size() || std::llabs(gens[i][col]) < std::llabs(gens[best][col]))) best = i;
            }
            if (best == gens.size()) break;
            bool reduced = false;
            for (std::size_t i = 0; i < gens.size(); ++i) {
                if (i == best || gens[i][col] == 0) continue;
                const std::int64_t f = gens[i][col] / gens[best][col];
                for (std::size_t j = 0; j < rank; ++j) gens[i][j] -= f * gens[best][j];
                reduced = true;
            }
            std::size_t nonzero = 0;
            for (const auto& g : gens) nonzero += g[col] != 0 ? 1 : 0;
            if (nonzero <= 1) {
                IntVec pivot = gens[best];
                if (pivot[col] < 0) pivot = neg(pivot);
                basis.push_back(pivot);
                gens.erase(gens.begin() + static_cast<std::ptrdiff_t>(best));
                break;
            }
            if (!reduced) break;
        }
        gens.erase(std::remove_if(gens.begin(), gens.end(), is_zero_vec), gens.end());
        ++col;
    }
    return basis;
}

IntMat gram_of(const IntegralLattice& lattice, const IntMat& basis) {
    IntMat g(basis.size(), IntVec(basis.size()));
    for (std::size_t i = 0; i < basis.size(); ++i) {
        for (std::size_t j = 0; j < basis.size(); ++j) g[i][j] = lattice.form(basis[i], basis[j]);
    }
    return g;
}

// Integer coordinates of a in the given basis, if any.
std::optional<IntVec> integer_coordinates(const IntMat& basis, const IntVec& a) {
    if (basis.empty()) return is_zero_vec(a) ? std::optional<IntVec>(IntVec{}) : std::nullopt;
    // Solve with rationals on the pivot structure of the Hermite basis.
    const std::size_t s = basis.size();
    const std::size_t r = a.size();
    std::vector<std::vector<mpq_class>> m(r, std::vector<mpq_class>(s + 1));
    for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t j = 0; j < s; ++j) m[i][j] = basis[j][i];
        m[i][s] = a[i];
    }
    std::size_t row = 0;
    std::vector<std::size_t> pivots;
    for (std::size_t c = 0; c < s && row < r; ++c) {
        std::size_t p = row;
        while (p < r && m[p][c] == 0) ++p;
        if (p == r) continue;
        std::swap(m[p], m[row]);
        const mpq_class inv = 1 / m[row][c];
        for (auto& x : m[row]) x *= inv;
        for (std::size_t i = 0; i < r; ++i) {
            if (i == row || m[i][c] == 0) continue;
            const mpq_class f = m[i][c];
            for (std::size_t j = 0; j <= s; ++j) m[i][j] -= f * m[row][j];
        }
        pivots.push_back(c);
        ++row;
    }
    for (std::size_t i = row; i < r; ++i) {
        if (m[i][s] != 0) return std::nullopt;
    }
    IntVec out(s, 0);
    for (std::size_t i = 0; i < pivots.size(); ++i) {
        mpq_class v = m[i][s];
        v.canonicalize();
        if (v.get_den() != 1) return std::nullopt;
        out[pivots[i]] = v.get_num().get_si();
    }
    return out;
}

using CycVec = std::vector<Cyclotomic>;

// Row echelon helper over cyclotomic vectors: keeps an independent subset.
class CycSpan {
public:
    bool insert(const CycVec& v) {
        CycVec r = reduce(v);
        auto it = std::find_if(r.begin(), r.end(), [](const Cyclotomic& c) { return !c.is_zero(); });
        if (it == r.end()) return false;
        const std::size_t p = static_cast<std::size_t>(it - r.begin());
        const Cyclotomic inv = r[p].inverse();
        for (auto& x : r) x *= inv;
        rows_.push_back({p, r});
        originals_.push_back(v);
        return true;
    }
    const std::vector<CycVec>& vectors() const { return originals_; }

private:
    CycVec reduce(CycVec v) const {
        for (const auto& [p, row] : rows_) {
            if (v[p].is_zero()) continue;
            const Cyclotomic f = v[p];
            for (std::size_t i = 0; i < v.size(); ++i) v[i] -= f * row[i];
        }
        return v;
    }
    std::vector<std::pair<std::size_t, CycVec>> rows_;
    std::vector<CycVec> originals_;
};

// Coordinates of target in terms of the (independent) basis.
CycVec solve_in_basis(const std::vector<CycVec>& basis, const CycVec& target) {
    const std::size_t s = basis.size();
    const std::size_t r = target.size();
    CycMatrix m(r, CycVec(s + 1));
    for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t j = 0; j < s; ++j) m[i][j] = basis[j][i];
        m[i][s] = target[i];
    }
    std::size_t row = 0;
    std::vector<std::size_t> pivots;
    for (std::size_t c = 0; c < s && row < r; ++c) {
        std::size_t p = row;
        while (p < r && m[p][c].is_zero()) ++p;
        if (p == r) continue;
        std::swap(m[p], m[row]);
        const Cyclotomic inv = m[row][c].inverse();
        for (auto& x : m[row]) x *= inv;
        for (std::size_t i = 0; i < r; ++i) {
            if (i == row || m[i][c].is_zero()) continue;
            const Cyclotomic f = m[i][c];
            for (std::size_t j = 0; j <= s; ++j) m[i][j] -= f * m[row][j];
        }
        pivots.push_back(c);
        ++row;
    }
    for (std::size_t i = row; i < r; ++i) {
        if (!m[i][s].is_zero()) throw std::logic_error("solve_in_basis: vector outside the span");
    }
    CycVec out(s);
    for (std::size_t i = 0; i < pivots.size(); ++i) out[pivots[i]] = m[i][s];
    return out;
}

// Bases of the eigenspaces h_(j) = {h : nu h = eta^j h}, in lattice coordinates.
std::vector<std::vector<CycVec>> eigenspaces(const IntegralLattice& lattice, const IsometryTwist& twist) {
    const int k = twist.k();
    const std::size_t r = lattice.rank();
    std::vector<std::vector<CycVec>> out(static_cast<std::size_t>(k));
    const Cyclotomic eta = twist.eta();
    for (int j = 0; j < k; ++j) {
        CycSpan span;
        for (std::size_t i = 0; i < r; ++i) {
            // P_j e_i = (1/k) sum_t eta^{-jt} nu^t e_i
            CycVec v(r);
            for (int t = 0; t < k; ++t) {
                const IntVec img = twist.apply(lattice.basis_vector(i), t);
                const Cyclotomic c = eta.pow(-static_cast<long>(j) * t) * Cyclotomic(mpq_class(1, k));
                for (std::size_t a = 0; a < r; ++a) {
                    if (img[a] != 0) v[a] += c * Cyclotomic(static_cast<long>(img[a]));
                }
            }
            span.insert(v);
        }
        out[static_cast<std::size_t>(j)] = span.vectors();
    }
    return out;
}

CycVec eigen_projection(const IntegralLattice& lattice, const IsometryTwist& twist, const IntVec& a, int j) {
    const int k = twist.k();
    const std::size_t r = lattice.rank();
    CycVec v(r);
    const Cyclotomic eta = twist.eta();
    for (int t = 0; t < k; ++t) {
        const IntVec img = twist.apply(a, t);
        const Cyclotomic c = eta.pow(-static_cast<long>(j) * t) * Cyclotomic(mpq_class(1, k));
        for (std::size_t b = 0; b < r; ++b) {
            if (img[b] != 0) v[b] += c * Cyclotomic(static_cast<long>(img[b]));
        }
    }
    return v;
}

// Quadratic correction f with f(a + b) / (f(a) f(b)) = delta(a, b), delta symmetric
// bimultiplicative given by exponents on basis pairs.
std::int64_t quadratic_exponent(const std::vector<std::vector<std::int64_t>>& delta, const IntVec& a) {
    std::int64_t e = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        e += delta[i][i] * (a[i] * (a[i] - 1) / 2);
        for (std::size_t j = i + 1; j < a.size(); ++j) e += delta[i][j] * a[i] * a[j];
    }
    return e;
}

Rat heisenberg_weight(const Monomial& m) {
    Rat w(0);
    for (const auto& md : m.word) w -= md.level;
    return w;
}

Rat heisenberg_weight(const SuperVector& v) {
    Rat best(0);
    for (const auto& [m, c] : v.terms()) best = std::max(best, heisenberg_weight(m));
    return best;
}

HVector combine(const std::vector<std::vector<HVector>>& proj, const IntVec& beta, std::size_t j) {
    HVector h;
    for (std::size_t i = 0; i < beta.size(); ++i) {
        if (beta[i] == 0) continue;
        for (const auto& [g, c] : proj[i][j]) h[g] += c * Cyclotomic(static_cast<long>(beta[i]));
    }
    for (auto it = h.begin(); it != h.end();) it = it->second.is_zero() ? h.erase(it) : std::next(it);
    return h;
}

std::size_t mode_class(Rat p, int k) { return static_cast<std::size_t>(mod((p * Rat(k)).to_int(), k)); }

// exp(sum_t coef_t h_t(p_t) y^{|p_t|}) u, graded by total degree <= cap.
struct ExpTerm {
    Rat p;
    HVector h;
    Cyclotomic coef;
};

std::map<Rat, SuperVector> apply_exponential(const FockSpace& space, const std::vector<ExpTerm>& terms, const SuperVector& u,
                                             Rat cap) {
    std::map<Rat, SuperVector> cur{{Rat(0), u}};
    for (const auto& t : terms) {
        const Rat step = t.p < Rat(0) ? -t.p : t.p;
        std::map<Rat, SuperVector> next;
        for (const auto& [d, vec] : cur) {
            SuperVector x = vec;
            Cyclotomic c(1);
            for (std::int64_t j = 0; d + step * Rat(j) <= cap && !x.is_zero(); ++j) {
                next[d + step * Rat(j)] += x * c;
                x = space.apply(t.h, t.p, x);
                c *= t.coef * Cyclotomic(mpq_class(1, j + 1));
            }
        }
        cur = std::move(next);
    }
    for (auto it = cur.begin(); it != cur.end();) it = it->second.is_zero() ? cur.erase(it) : std::next(it);
    return cur;
}

// Shared engine for Y(v, x) = :prod d_{n_i - 1} alpha_i(x) Y(e_beta, x):, where
// alpha(x) = sum_p proj(alpha, class p)(p) x^{-p-1} over p in (1/k)Z.
struct FieldEngine {
    const FockSpace& target;
    int k;
    const std::vector<std::vector<HVector>>& proj;
    std::function<SuperVector(const IntVec&, const SuperVector&)> group;
    std::function<Rat(const IntVec&, const Monomial&)> exponent;
    Cyclotomic prefactor;

    std::vector<ExpTerm> exp_terms(const IntVec& beta, bool annihilation, Rat cap) const {
        std::vector<ExpTerm> out;
        if (is_zero_vec(beta)) return out;
        for (Rat s = Rat(1, k); s <= cap; s += Rat(1, k)) {
            const Rat p = annihilation ? s : -s;
            HVector h = combine(proj, beta, mode_class(p, k));
            if (h.empty()) continue;
            // integral of beta(x) - beta(0)/x: beta(p) x^{-p} / (-p)
            out.push_back({p, std::move(h), Cyclotomic((Rat(-1) / p).to_mpq())});
        }
        return out;
    }

    SuperVector run(const Monomial& v, Rat n, const Monomial& w, const Cyclotomic& wc) const {
        SuperVector out;
        const IntVec& beta = v.sector;
        struct Factor {
            int gen;
            std::int64_t depth;  // n_i
        };
        std::vector<Factor> factors;
        for (const auto& md : v.word) factors.push_back({md.gen, (-md.level).to_int()});
        const Rat target_power = -n - Rat(1);
        const Rat base_power = exponent(beta, w);
        const SuperVector w_vec(w, wc);

        std::vector<std::size_t> left;
        auto finish_left = [&](const SuperVector& shifted, Rat power) {
            Rat creation = target_power - power;
            for (std::size_t i : left) creation += Rat(factors[i].depth);
            if (creation < Rat(0)) return;
            const auto eminus = apply_exponential(target, exp_terms(beta, false, creation), shifted, creation);
            if (eminus.empty()) return;
            std::vector<Rat> levels(left.size());
            auto rec = [&](auto&& self, std::size_t idx, Rat used) -> void {
                if (idx == left.size()) {
                    auto it = eminus.find(creation - used);
                    if (it == eminus.end()) return;
                    SuperVector x = it->second;
                    Cyclotomic c(1);
                    for (std::size_t t = 0; t < left.size() && !x.is_zero(); ++t) {
                        const Factor& f = factors[left[t]];
                        const Rat p = -levels[t];
                        x = target.apply(proj[static_cast<std::size_t>(f.gen)][mode_class(p, k)], p, x);
                        c *= Cyclotomic(binom(levels[t] - Rat(1), f.depth - 1));
                    }
                    if (!x.is_zero()) out += x * c;
                    return;
                }
                const Factor& f = factors[left[idx]];
                for (Rat q = Rat(1, k); used + q <= creation; q += Rat(1, k)) {
                    if (proj[static_cast<std::size_t>(f.gen)][mode_class(-q, k)].empty()) continue;
                    levels[idx] = q;
                    self(self, idx + 1, used + q);
                }
            };
            rec(rec, 0, Rat(0));
        };

        auto finish_right = [&](const SuperVector& cur, Rat power) {
            const Rat cap = heisenberg_weight(cur);
            for (const auto& [d, vec] : apply_exponential(target, exp_terms(beta, true, cap), cur, cap)) {
                finish_left(group(beta, vec), power - d);
            }
        };

        auto rec = [&](auto&& self, std::size_t idx, const SuperVector& cur, Rat power) -> void {
            if (cur.is_zero()) return;
            if (idx == factors.size()) {
                finish_right(cur, power);
                return;
            }
            const Factor& f = factors[idx];
            left.push_back(idx);
            self(self, idx + 1, cur, power);
            left.pop_back();
            const Rat budget = heisenberg_weight(cur);
            for (Rat p = Rat(0); p <= budget; p += Rat(1, k)) {
                const HVector& h = proj[static_cast<std::size_t>(f.gen)][mode_class(p, k)];
                if (h.empty()) continue;
                const Cyclotomic c(binom(-p - Rat(1), f.depth - 1));
                if (c.is_zero()) continue;
                SuperVector next = target.apply(h, p, cur);
                if (next.is_zero()) continue;
                self(self, idx + 1, next * c, power - p - Rat(f.depth));
            }
        };
        rec(rec, 0, w_vec, base_power);
        return out * prefactor;
    }
};

}  // namespace

// ---------------------------------------------------------------- lattices

IntegralLattice::IntegralLattice(IntMat gram) : gram_(std::move(gram)) {
    const std::size_t n = gram_.size();
    for (const auto& row : gram_) {
        if (row.size() != n) throw std::invalid_argument("IntegralLattice: gram must be square");
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (gram_[i][j] != gram_[j][i]) throw std::invalid_argument("IntegralLattice: gram must be symmetric");
        }
    }
    for (std::size_t m = 1; m <= n; ++m) {
        IntMat minor(m, IntVec(m));
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = 0; j < m; ++j) minor[i][j] = gram_[i][j];
        }
        if (det_int(minor) <= 0) throw std::invalid_argument("IntegralLattice: gram must be positive definite");
    }
}

std::int64_t IntegralLattice::form(const IntVec& a, const IntVec& b) const {
    std::int64_t s = 0;
    for (std::size_t i = 0; i < gram_.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < gram_.size(); ++j) s += a[i] * gram_[i][j] * b[j];
    }
    return s;
}

IntVec IntegralLattice::basis_vector(std::size_t i) const {
    IntVec v(rank(), 0);
    v.at(i) = 1;
    return v;
}

std::vector<IntVec> IntegralLattice::box(std::int64_t bound) const {
    std::vector<IntVec> out{IntVec{}};
    for (std::size_t i = 0; i < rank(); ++i) {
        std::vector<IntVec> next;
        for (const auto& v : out) {
            for (std::int64_t c = -bound; c <= bound; ++c) {
                IntVec w = v;
                w.push_back(c);
                next.push_back(std::move(w));
            }
        }
        out = std::move(next);
    }
    return out;
}

IsometryTwist::IsometryTwist(const IntegralLattice& lattice, IntMat nu, int k, int eta_exp, std::vector<std::int64_t> lift_exps)
    : nu_(std::move(nu)), k_(k), eta_exp_(eta_exp), lift_(std::move(lift_exps)) {
    const std::size_t r = lattice.rank();
    if (k_ < 1) throw std::invalid_argument("IsometryTwist: period must be positive");
    if (std::gcd(eta_exp_, k_) != 1) throw std::invalid_argument("IsometryTwist: eta must be a primitive k-th root");
    if (nu_.size() != r) throw std::invalid_argument("IsometryTwist: matrix size must match the rank");
    for (const auto& row : nu_) {
        if (row.size() != r) throw std::invalid_argument("IsometryTwist: matrix must be square");
    }
    if (lift_.empty()) lift_.assign(r, 0);
    if (lift_.size() != r) throw std::invalid_argument("IsometryTwist: one lift exponent per basis vector");
    for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t j = 0; j < r; ++j) {
            if (lattice.form(apply(lattice.basis_vector(i)), apply(lattice.basis_vector(j))) != lattice.gram()[i][j]) {
                throw std::invalid_argument("IsometryTwist: nu does not preserve the form");
            }
        }
        IntVec power = lattice.basis_vector(i);
        for (int t = 0; t < k_; ++t) power = apply(power);
        if (power != lattice.basis_vector(i)) {
            throw std::invalid_argument("IsometryTwist: nu^k is not the identity");
        }
    }
}

IsometryTwist IsometryTwist::identity(const IntegralLattice& lattice, int k) {
    IntMat id(lattice.rank(), IntVec(lattice.rank(), 0));
    for (std::size_t i = 0; i < lattice.rank(); ++i) id[i][i] = 1;
    return IsometryTwist(lattice, id, k);
}

IntVec IsometryTwist::apply(const IntVec& a, int power) const {
    IntVec v = a;
    const int p = static_cast<int>(mod(power, k_));
    for (int t = 0; t < p; ++t) {
        IntVec w(v.size(), 0);
        for (std::size_t i = 0; i < v.size(); ++i) {
            for (std::size_t j = 0; j < v.size(); ++j) w[i] += nu_[i][j] * v[j];
        }
        v = std::move(w);
    }
    return v;
}

Cyclotomic IsometryTwist::eta() const { return Cyclotomic::root(k_, eta_exp_); }

Cyclotomic IsometryTwist::eta_pow(Rat e) const {
    const Rat twice = e * Rat(2);
    if (!twice.is_integer()) throw std::invalid_argument("eta_pow: exponent must lie in (1/2)Z");
    return Cyclotomic::root(2 * k_, mod(twice.num() * eta_exp_, 2 * k_));
}

Cyclotomic IsometryTwist::eta0_pow(std::int64_t e) const {
    const std::int64_t g = k_ % 2 == 0 ? eta_exp_ : 2 * eta_exp_ + k_;
    return Cyclotomic::root(q(), mod(g * mod(e, q()), q()));
}

std::int64_t IsometryTwist::eta0_exponent(std::int64_t sign_exp, std::int64_t eta_power) const {
    if (k_ % 2 == 0) return mod(mod(sign_exp, 2) * (k_ / 2) + eta_power, q());
    return mod(mod(sign_exp, 2) * k_ + mod(eta_power, k_) * (k_ + 1), q());
}

std::int64_t IsometryTwist::lift_exponent(const IntVec& a) const { return mod(dot(lift_, a), q()); }

Commutators commutator_maps(const IntegralLattice& lattice, const IsometryTwist& twist, const IntVec& a, const IntVec& b) {
    return {twist.eta0_pow(commutator_exponent(lattice, twist, a, b, false)),
            twist.eta0_pow(commutator_exponent(lattice, twist, a, b, true))};
}

std::int64_t commutator_exponent(const IntegralLattice& lattice, const IsometryTwist& twist, const IntVec& a, const IntVec& b,
                                 bool twisted) {
    std::int64_t sign = lattice.norm(a) * lattice.norm(b);
    std::int64_t eta_power = 0;
    if (!twisted) {
        sign += lattice.form(a, b);
    } else {
        for (int j = 0; j < twist.k(); ++j) {
            const std::int64_t f = lattice.form(twist.apply(a, j), b);
            sign += f;
            eta_power += j * f;
        }
    }
    return twist.eta0_exponent(sign, eta_power);
}

LiftOrderReport lift_order_check(const IntegralLattice& lattice, const IsometryTwist& twist) {
    const int k = twist.k();
    if (k % 2 != 0) throw std::invalid_argument("lift_order_check: k must be even");
    LiftOrderReport rep;
    for (std::size_t i = 0; i < lattice.rank(); ++i) {
        LiftOrderEntry e;
        e.alpha = lattice.basis_vector(i);
        const std::int64_t par = lattice.parity(e.alpha);
        e.half_period_pairing = lattice.form(twist.apply(e.alpha, k / 2), e.alpha);
        e.pairing_condition = mod(e.half_period_pairing - par, 2) == 0;
        std::int64_t s1 = 0;
        std::int64_t s2 = 0;
        for (int j = 0; j < k; ++j) {
            const std::int64_t f = lattice.form(twist.apply(e.alpha, j), e.alpha);
            s1 += f;
            s2 += j * f;
        }
        e.sum_condition = mod(s1 - par, 2) == 0;
        e.weighted_sum_condition = mod(s2, k) == 0;
        if (!e.pairing_condition) rep.must_double = true;
        rep.entries.push_back(std::move(e));
    }
    return rep;
}

std::int64_t Cocycle::exponent(const IntVec& a, const IntVec& b) const {
    std::int64_t e = 0;
    for (std::size_t i = 0; i < exps_.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < exps_.size(); ++j) e += exps_[i][j] * a[i] * b[j];
    }
    return mod(e, q_);
}

bool Cocycle::is_trivial() const {
    for (const auto& row : exps_) {
        for (auto e : row) {
            if (mod(e, q_) != 0) return false;
        }
    }
    return true;
}

Cocycle cocycle_section(const IntegralLattice& lattice, const IsometryTwist& twist, Extension which) {
    const std::size_t r = lattice.rank();
    std::vector<std::vector<std::int64_t>> exps(r, std::vector<std::int64_t>(r, 0));
    for (std::size_t i = 0; i < r; ++i) {
        const IntVec ei = lattice.basis_vector(i);
        if (commutator_exponent(lattice, twist, ei, ei, which == Extension::twisted) != 0) {
            throw std::domain_error("cocycle_section: commutator map is not alternating; no bimultiplicative cocycle");
        }
        for (std::size_t j = i + 1; j < r; ++j) {
            exps[i][j] = commutator_exponent(lattice, twist, ei, lattice.basis_vector(j), which == Extension::twisted);
        }
    }
    return Cocycle(std::move(exps), twist.q(), twist.eta0_pow(1));
}

Cyclotomic extension_identification_factor(const IntegralLattice& lattice, const IsometryTwist& twist, const IntVec& a,
                                           const IntVec& b) {
    std::int64_t sign = 0;
    std::int64_t eta_power = 0;
    for (int j = 1; 2 * j < twist.k(); ++j) {
        const std::int64_t f = lattice.form(twist.apply(a, -j), b);
        sign += f;
        eta_power += j * f;
    }
    return twist.eta0_pow(twist.eta0_exponent(sign, eta_power));
}

CentralExtension::CentralExtension(IntegralLattice lattice, IsometryTwist twist, Extension which)
    : lattice_(std::move(lattice)), twist_(std::move(twist)), cocycle_(cocycle_section(lattice_, twist_, which)) {}

std::int64_t CentralExtension::reduce(std::int64_t e) const { return mod(e, twist_.q()); }

ExtElement CentralExtension::multiply(const ExtElement& x, const ExtElement& y) const {
    return {reduce(x.phase + y.phase + cocycle_.exponent(x.vec, y.vec)), add(x.vec, y.vec)};
}

ExtElement CentralExtension::inverse(const ExtElement& x) const {
    const IntVec m = neg(x.vec);
    return {reduce(-x.phase - cocycle_.exponent(x.vec, m)), m};
}

ExtElement CentralExtension::lift(const ExtElement& x) const {
    // With a cocycle that nu does not preserve, u needs the quadratic factor
    // f(a+b)/(f(a)f(b)) = eps(nu a, nu b)/eps(a, b).
    const std::size_t r = lattice_.rank();
    std::vector<std::vector<std::int64_t>> delta(r, std::vector<std::int64_t>(r));
    for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t j = 0; j < r; ++j) {
            const IntVec ei = lattice_.basis_vector(i);
            const IntVec ej = lattice_.basis_vector(j);
            delta[i][j] = cocycle_.exponent(twist_.apply(ei), twist_.apply(ej)) - cocycle_.exponent(ei, ej);
        }
    }
    return {reduce(x.phase + twist_.lift_exponent(x.vec) + quadratic_exponent(delta, x.vec)), twist_.apply(x.vec)};
}

// ------------------------------------------------------------ tau and chi

Cyclotomic tau_character(const IntegralLattice& lattice, const IsometryTwist& twist, const IntVec& a) {
    std::int64_t s = 0;
    for (int j = 0; j < twist.k(); ++j) s += lattice.form(twist.apply(a, j), a);
    return twist.eta_pow(Rat(twist.k() * lattice.norm(a) - s, 2));
}

namespace {

// x(a) = a nu-hat(a^{-1}) and the value tau assigns to the section element e_{x(a)}.
struct TauData {
    ExtElement x;
    Cyclotomic tau_section;
};

TauData tau_data(const CentralExtension& ext, const IntVec& a) {
    const ExtElement ea = ext.section(a);
    const ExtElement x = ext.multiply(ea, ext.lift(ext.inverse(ea)));
    const Cyclotomic t = tau_character(ext.lattice(), ext.twist(), a);
    return {x, t * ext.scalar(-x.phase)};
}

std::string vec_str(const IntVec& v) {
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s + ")";
}

}  // namespace

CheckResult verify_tau_homomorphism(const IntegralLattice& lattice, const IsometryTwist& twist, std::int64_t bound) {
    CheckResult res;
    const CentralExtension ext(lattice, twist, Extension::twisted);
    const auto box = lattice.box(bound);
    std::map<IntVec, Cyclotomic> section_value;
    bool in_eta = twist.k() % 2 == 0;
    if (in_eta) {
        for (const auto& a : box) {
            const std::int64_t h = lattice.form(twist.apply(a, twist.k() / 2), a);
            if (mod(h - lattice.parity(a), 2) != 0) in_eta = false;
        }
    }
    for (const auto& a : box) {
        const TauData d = tau_data(ext, a);
        ++res.checked;
        IntVec expect = sub(a, twist.apply(a));
        if (d.x.vec != expect) res.fail("a nu-hat a^-1 does not cover (1-nu)a at a=" + vec_str(a));
        if (is_zero_vec(d.x.vec) && (d.x.phase != 0 || !d.tau_section.is_one())) {
            res.fail("a nu-hat a^-1 meets the center nontrivially at a=" + vec_str(a));
        }
        auto [it, fresh] = section_value.emplace(d.x.vec, d.tau_section);
        if (!fresh && !(it->second == d.tau_section)) res.fail("tau not well defined at a=" + vec_str(a));
        if (in_eta) {
            std::int64_t s = 0;
            for (int j = 0; j < twist.k(); ++j) s += lattice.form(twist.apply(a, j), a);
            if (mod(twist.k() * lattice.norm(a) - s, 2) != 0) res.fail("tau leaves <eta> at a=" + vec_str(a));
        }
    }
    for (const auto& a : box) {
        const TauData da = tau_data(ext, a);
        for (const auto& b : box) {
            const TauData db = tau_data(ext, b);
            const ExtElement prod = ext.multiply(da.x, db.x);
            const TauData dc = tau_data(ext, add(a, b));
            if (dc.x.vec != prod.vec) {
                res.fail("product of commutators leaves M at " + vec_str(a) + "," + vec_str(b));
                continue;
            }
            ++res.checked;
            const Cyclotomic lhs = ext.scalar(prod.phase) * dc.tau_section;
            const Cyclotomic rhs = (da.tau_section * ext.scalar(da.x.phase)) * (db.tau_section * ext.scalar(db.x.phase));
            if (!(lhs == rhs)) res.fail("tau not multiplicative at " + vec_str(a) + "," + vec_str(b));
        }
    }
    return res;
}

TwistSublattices twist_sublattices(const IntegralLattice& lattice, const IsometryTwist& twist, std::int64_t box) {
    TwistSublattices out;
    const std::size_t r = lattice.rank();
    std::vector<IntVec> n_elems;
    for (const auto& a : lattice.box(box)) {
        IntVec s(r, 0);
        for (int j = 0; j < twist.k(); ++j) s = add(s, twist.apply(a, j));
        if (is_zero_vec(s)) n_elems.push_back(a);
    }
    out.n_basis = lattice_basis(n_elems, r);
    std::vector<IntVec> m_gens;
    for (std::size_t i = 0; i < r; ++i) m_gens.push_back(sub(lattice.basis_vector(i), twist.apply(lattice.basis_vector(i))));
    out.m_basis = lattice_basis(m_gens, r);
    std::vector<IntVec> r_elems;
    for (const auto& a : n_elems) {
        bool central = true;
        for (const auto& b : out.n_basis) central = central && commutator_exponent(lattice, twist, a, b, true) == 0;
        if (central) r_elems.push_back(a);
    }
    out.r_basis = lattice_basis(r_elems, r);
    auto index = [&](const IntMat& big, const IntMat& small) -> std::int64_t {
        if (small.size() != big.size()) throw std::logic_error("twist_sublattices: rank mismatch");
        if (big.empty()) return 1;
        const std::int64_t ratio = det_int(gram_of(lattice, small)) / det_int(gram_of(lattice, big));
        std::int64_t root = 0;
        while ((root + 1) * (root + 1) <= ratio) ++root;
        return root;
    };
    out.index_r_over_m = index(out.r_basis, out.m_basis);
    out.index_n_over_r = index(out.n_basis, out.r_basis);
    return out;
}

Cyclotomic ChiCharacter::operator()(const IntVec& a) const {
    auto coords = integer_coordinates(r_basis, a);
    if (!coords) throw std::invalid_argument("chi: vector outside R");
    Cyclotomic v(1);
    for (std::size_t i = 0; i < coords->size(); ++i) v *= values[i].pow((*coords)[i]);
    return v;
}

std::vector<ChiCharacter> enumerate_chi(const IntegralLattice& lattice, const IsometryTwist& twist, std::int64_t box) {
    const TwistSublattices sub = twist_sublattices(lattice, twist, box);
    const CentralExtension ext(lattice, twist, Extension::twisted);
    for (const auto& a : sub.r_basis) {
        for (const auto& b : sub.r_basis) {
            if (ext.cocycle().exponent(a, b) != 0) throw std::domain_error("enumerate_chi: twisted cocycle is not trivial on R");
        }
    }
    // tau on the generators (1 - nu) e_i of M.
    std::vector<std::pair<IntVec, Cyclotomic>> constraints;
    for (std::size_t i = 0; i < lattice.rank(); ++i) {
        const TauData d = tau_data(ext, lattice.basis_vector(i));
        auto coords = integer_coordinates(sub.r_basis, d.x.vec);
        if (!coords) throw std::logic_error("enumerate_chi: M is not inside R");
        constraints.emplace_back(*coords, d.tau_section);
    }
    const int order = 2 * twist.k() * static_cast<int>(sub.index_r_over_m);
    std::vector<ChiCharacter> out;
    const std::size_t s = sub.r_basis.size();
    std::vector<long> exps(s, 0);
    for (;;) {
        ChiCharacter chi{sub.r_basis, {}};
        for (long e : exps) chi.values.push_back(Cyclotomic::root(order, e));
        bool ok = true;
        for (const auto& [coords, value] : constraints) {
            Cyclotomic v(1);
            for (std::size_t i = 0; i < s; ++i) v *= chi.values[i].pow(coords[i]);
            ok = ok && v == value;
        }
        if (ok) out.push_back(std::move(chi));
        std::size_t i = 0;
        while (i < s && ++exps[i] == order) exps[i++] = 0;
        if (i == s) break;
    }
    return out;
}

// -------------------------------------------------------------- constants

DeltaConstants::DeltaConstants(int k, Cyclotomic eta, int depth) : k_(k), depth_(depth) {
    const auto d = static_cast<std::size_t>(depth);
    using Series = std::vector<std::vector<Cyclotomic>>;
    auto zero_series = [&] { return Series(d + 1, std::vector<Cyclotomic>(d + 1)); };
    auto mul = [&](const Series& a, const Series& b) {
        Series c = zero_series();
        for (std::size_t i = 0; i <= d; ++i) {
            for (std::size_t j = 0; i + j <= d; ++j) {
                if (a[i][j].is_zero()) continue;
                for (std::size_t p = 0; i + p <= d; ++p) {
                    for (std::size_t q = 0; i + j + p + q <= d; ++q) {
                        if (!b[p][q].is_zero()) c[i + p][j + q] += a[i][j] * b[p][q];
                    }
                }
            }
        }
        return c;
    };
    // log(((1+x)^{1/k} - eta^{-r}(1+y)^{1/k}) / (1 - eta^{-r})) for r = 1..k-1
    std::vector<Series> logs(static_cast<std::size_t>(k));
    for (int r = 1; r < k; ++r) {
        const Cyclotomic er = eta.pow(-r);
        const Cyclotomic denom = (Cyclotomic(1) - er).inverse();
        Series b = zero_series();
        for (std::size_t m = 1; m <= d; ++m) {
            const Cyclotomic bin(binom(Rat(1, k), static_cast<std::int64_t>(m)));
            b[m][0] = bin * denom;
            b[0][m] = -(er * bin * denom);
        }
        Series acc = zero_series();
        Series power = b;
        for (std::size_t j = 1; j <= d; ++j) {
            const Cyclotomic c(mpq_class(j % 2 == 1 ? 1 : -1, static_cast<long>(j)));
            for (std::size_t m = 0; m <= d; ++m) {
                for (std::size_t n = 0; m + n <= d; ++n) acc[m][n] += power[m][n] * c;
            }
            power = mul(power, b);
        }
        logs[static_cast<std::size_t>(r)] = std::move(acc);
    }
    c_.assign(static_cast<std::size_t>(k), zero_series());
    const Cyclotomic half(mpq_class(1, 2));
    for (std::size_t m = 0; m <= d; ++m) {
        for (std::size_t n = 0; m + n <= d; ++n) {
            Cyclotomic sum;
            for (int r = 1; r < k; ++r) {
                c_[static_cast<std::size_t>(r)][m][n] = half * logs[static_cast<std::size_t>(r)][m][n];
                sum += logs[static_cast<std::size_t>(r)][m][n];
            }
            c_[0][m][n] = -(half * sum);
        }
    }
}

const Cyclotomic& DeltaConstants::operator()(int m, int n, int r) const {
    if (m < 0 || n < 0 || m + n > depth_) return zero_;
    return c_[static_cast<std::size_t>(mod(r, k_))][static_cast<std::size_t>(m)][static_cast<std::size_t>(n)];
}

DeltaConstants delta_constants(int k, const Cyclotomic& eta, int depth) { return DeltaConstants(k, eta, depth); }

Cyclotomic rho_factor(const IntegralLattice& lattice, const IsometryTwist& twist, const IntVec& a) {
    const int k = twist.k();
    Cyclotomic r(1);
    if (k % 2 == 0) {
        const std::int64_t e = lattice.form(twist.apply(a, k / 2), a);
        r = Cyclotomic::sqrt2().pow(e);
    }
    const Cyclotomic eta = twist.eta();
    for (int j = 1; 2 * j < k; ++j) {
        r *= (Cyclotomic(1) - eta.pow(-j)).pow(lattice.form(twist.apply(a, j), a));
    }
    return r;
}

Cyclotomic rho_phase(const IntegralLattice& lattice, const IsometryTwist& twist, const IntVec& a) {
    // 1 - eta^{-j} = 2 sin(pi e j / k) * i * zeta_{2k}^{-e j} for eta = zeta_k^e.
    const int k = twist.k();
    Cyclotomic p(1);
    for (int j = 1; 2 * j < k; ++j) {
        const std::int64_t ej = mod(static_cast<std::int64_t>(twist.eta_exponent()) * j, 2 * k);
        Cyclotomic unit = Cyclotomic::root(4 * k, k - 2 * ej);
        if (ej > k) unit = -unit;
        p *= unit.pow(lattice.form(twist.apply(a, j), a));
    }
    return p;
}

Rat twisted_vacuum_weight(const IntegralLattice& lattice, const IsometryTwist& twist) {
    const int k = twist.k();
    const auto eig = eigenspaces(lattice, twist);
    Rat w(0);
    for (int j = 1; j < k; ++j) w += Rat(j * (k - j) * static_cast<std::int64_t>(eig[static_cast<std::size_t>(j)].size()));
    return w / Rat(4 * k * k);
}

// ------------------------------------------------------------------- V_L

namespace {

std::vector<std::vector<HVector>> identity_projection(std::size_t r) {
    std::vector<std::vector<HVector>> p(r, std::vector<HVector>(1));
    for (std::size_t i = 0; i < r; ++i) p[i][0] = HVector{{static_cast<int>(i), Cyclotomic(1)}};
    return p;
}

}  // namespace

LatticeAlgebra::LatticeAlgebra(IntegralLattice lattice, Cocycle cocycle) : lattice_(std::move(lattice)), cocycle_(std::move(cocycle)) {
    const std::size_t r = lattice_.rank();
    std::vector<Generator> gens;
    std::vector<std::vector<Cyclotomic>> form(r, std::vector<Cyclotomic>(r));
    for (std::size_t i = 0; i < r; ++i) {
        gens.push_back({r == 1 ? std::string("alpha") : "alpha" + std::to_string(i + 1), Statistics::bosonic, Rat(0), ZeroMode::sector});
        for (std::size_t j = 0; j < r; ++j) form[i][j] = Cyclotomic(static_cast<long>(lattice_.gram()[i][j]));
    }
    auto space = std::make_shared<FockSpace>("V_L", gens, form, Rat(0), Rat(static_cast<std::int64_t>(r)));
    space->set_lattice(lattice_.gram(), form);
    space_ = std::move(space);
}

SuperVector LatticeAlgebra::group_action(const IntVec& beta, const SuperVector& w) const {
    SuperVector out;
    for (const auto& [m, c] : w.terms()) {
        Monomial shifted = m;
        shifted.sector = add(m.sector, beta);
        out.add(std::move(shifted), c * cocycle_.value(beta, m.sector));
    }
    return out;
}

SuperVector LatticeAlgebra::monomial_mode(const Monomial& v, Rat n, const SuperVector& w) const {
    const auto proj = identity_projection(lattice_.rank());
    FieldEngine engine{*space_,
                       1,
                       proj,
                       [this](const IntVec& beta, const SuperVector& x) { return group_action(beta, x); },
                       [this](const IntVec& beta, const Monomial& x) { return Rat(lattice_.form(beta, x.sector)); },
                       Cyclotomic(1)};
    SuperVector out;
    for (const auto& [wm, wc] : w.terms()) out += engine.run(v, n, wm, wc);
    return out;
}

SuperVector LatticeAlgebra::conformal_vector() const {
    const std::size_t r = lattice_.rank();
    CycMatrix g(r, std::vector<Cyclotomic>(r));
    for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t j = 0; j < r; ++j) g[i][j] = Cyclotomic(static_cast<long>(lattice_.gram()[i][j]));
    }
    const CycMatrix ginv = inverse(g);
    SuperVector omega;
    for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t j = 0; j < r; ++j) {
            if (ginv[i][j].is_zero()) continue;
            omega += space_->state({{static_cast<int>(i), Rat(-1)}, {static_cast<int>(j), Rat(-1)}}) *
                     (ginv[i][j] * Cyclotomic(mpq_class(1, 2)));
        }
    }
    return omega;
}

LatticePtr build_VL(const IntegralLattice& lattice) {
    return build_VL(lattice, cocycle_section(lattice, IsometryTwist::identity(lattice), Extension::untwisted));
}

LatticePtr build_VL(const IntegralLattice& lattice, const Cocycle& cocycle) {
    return std::make_shared<const LatticeAlgebra>(lattice, cocycle);
}

SuperVector lift_action(const LatticeAlgebra& v, const IsometryTwist& twist, const SuperVector& x) {
    const auto& lat = v.lattice();
    const std::size_t r = lat.rank();
    std::vector<HVector> images(r);
    for (std::size_t i = 0; i < r; ++i) {
        const IntVec img = twist.apply(lat.basis_vector(i));
        for (std::size_t j = 0; j < r; ++j) {
            if (img[j] != 0) images[i][static_cast<int>(j)] = Cyclotomic(static_cast<long>(img[j]));
        }
    }
    // Quadratic correction for cocycles that nu does not preserve.
    auto correction = [&](const IntVec& a) {
        Cyclotomic c(1);
        for (std::size_t i = 0; i < r; ++i) {
            const IntVec ei = lat.basis_vector(i);
            const Cyclotomic dii = v.cocycle().value(twist.apply(ei), twist.apply(ei)) * v.cocycle().value(ei, ei).inverse();
            c *= dii.pow(a[i] * (a[i] - 1) / 2);
            for (std::size_t j = i + 1; j < r; ++j) {
                const IntVec ej = lat.basis_vector(j);
                const Cyclotomic dij = v.cocycle().value(twist.apply(ei), twist.apply(ej)) * v.cocycle().value(ei, ej).inverse();
                c *= dij.pow(a[i] * a[j]);
            }
        }
        return c;
    };
    SuperVector out;
    const auto& s = v.space();
    for (const auto& [m, c] : x.terms()) {
        SuperVector y = s.vacuum(twist.apply(m.sector));
        for (auto it = m.word.rbegin(); it != m.word.rend() && !y.is_zero(); ++it) {
            y = s.apply(images[static_cast<std::size_t>(it->gen)], it->level, y);
        }
        out += y * (c * twist.eta0_pow(twist.lift_exponent(m.sector)) * correction(m.sector));
    }
    return out;
}

// --------------------------------------------------- twisted lattice module

TwistedLatticeModule::TwistedLatticeModule(LatticePtr algebra, IsometryTwist twist, ChiCharacter chi, std::string name)
    : algebra_(std::move(algebra)), twist_(std::move(twist)), chi_(std::move(chi)), name_(std::move(name)) {
    const auto& lat = algebra_->lattice();
    const std::size_t r = lat.rank();
    const int k = twist_.k();
    const auto eig = eigenspaces(lat, twist_);
    if (!eig[0].empty()) throw std::invalid_argument("build_twisted_lattice_module: nu has fixed vectors (h_(0) != 0), unsupported");
    for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t j = 0; j < r; ++j) {
            if (commutator_exponent(lat, twist_, lat.basis_vector(i), lat.basis_vector(j), true) != 0) {
                throw std::invalid_argument("build_twisted_lattice_module: N != R (U_T of dimension > 1), unsupported");
            }
        }
    }
    std::vector<Generator> gens;
    std::vector<CycVec> gen_vecs;
    std::vector<std::pair<int, std::size_t>> gen_index;  // (class, position)
    std::size_t total = 0;
    for (const auto& e : eig) total += e.size();
    for (int j = 1; j < k; ++j) {
        const auto& basis = eig[static_cast<std::size_t>(j)];
        for (std::size_t t = 0; t < basis.size(); ++t) {
            std::string nm = total == 1 ? "alpha" : "h" + std::to_string(j) + (basis.size() > 1 ? "_" + std::to_string(t + 1) : "");
            gens.push_back({nm, Statistics::bosonic, Rat(j, k), ZeroMode::none});
            gen_vecs.push_back(basis[t]);
        }
    }
    const std::size_t g = gens.size();
    std::vector<std::vector<Cyclotomic>> form(g, std::vector<Cyclotomic>(g));
    for (std::size_t a = 0; a < g; ++a) {
        for (std::size_t b = 0; b < g; ++b) {
            Cyclotomic s;
            for (std::size_t x = 0; x < r; ++x) {
                if (gen_vecs[a][x].is_zero()) continue;
                for (std::size_t y = 0; y < r; ++y) {
                    if (gen_vecs[b][y].is_zero() || lat.gram()[x][y] == 0) continue;
                    s += gen_vecs[a][x] * gen_vecs[b][y] * Cyclotomic(static_cast<long>(lat.gram()[x][y]));
                }
            }
            form[a][b] = s;
        }
    }
    space_ = std::make_shared<const FockSpace>(name_, gens, form, twisted_vacuum_weight(lat, twist_), Rat(static_cast<std::int64_t>(r)));
    proj_.assign(r, std::vector<HVector>(static_cast<std::size_t>(k)));
    std::size_t offset = 0;
    for (int j = 1; j < k; ++j) {
        const auto& basis = eig[static_cast<std::size_t>(j)];
        for (std::size_t i = 0; i < r && !basis.empty(); ++i) {
            const CycVec coords = solve_in_basis(basis, eigen_projection(lat, twist_, lat.basis_vector(i), j));
            for (std::size_t t = 0; t < coords.size(); ++t) {
                if (!coords[t].is_zero()) proj_[i][static_cast<std::size_t>(j)][static_cast<int>(offset + t)] = coords[t];
            }
        }
        offset += basis.size();
    }
    // s(a, b) = eps_0(a, b) / F(a, b) must be symmetric; its square roots on
    // the diagonal are fixed by the phase of rho.
    const Cocycle& eps0 = algebra_->cocycle();
    section_diag_.resize(r);
    section_off_.assign(r, std::vector<Cyclotomic>(r, Cyclotomic(1)));
    auto s_value = [&](const IntVec& a, const IntVec& b) {
        return eps0.value(a, b) * extension_identification_factor(lat, twist_, a, b).inverse();
    };
    for (std::size_t i = 0; i < r; ++i) {
        const IntVec ei = lat.basis_vector(i);
        section_diag_[i] = rho_phase(lat, twist_, ei).inverse();
        if (!(section_diag_[i].pow(-2) == s_value(ei, ei))) {
            throw std::invalid_argument("build_twisted_lattice_module: no section change compatible with rho");
        }
        for (std::size_t j = 0; j < r; ++j) {
            const IntVec ej = lat.basis_vector(j);
            if (!(s_value(ei, ej) == s_value(ej, ei))) {
                throw std::invalid_argument("build_twisted_lattice_module: eps_0 / F is not symmetric, unsupported");
            }
            section_off_[i][j] = s_value(ei, ej);
        }
    }
}

Cyclotomic TwistedLatticeModule::section_factor(const IntVec& a) const {
    Cyclotomic g(1);
    for (std::size_t i = 0; i < a.size(); ++i) {
        g *= section_diag_[i].pow(a[i] * a[i]);
        for (std::size_t j = i + 1; j < a.size(); ++j) g *= section_off_[i][j].pow(-a[i] * a[j]);
    }
    return g;
}

void TwistedLatticeModule::ensure_constants(int depth) const {
    std::lock_guard<std::mutex> lock(constants_mutex_);
    if (!constants_ || constants_->depth() < depth) constants_.emplace(twist_.k(), twist_.eta(), std::max(depth, 4));
}

std::map<std::int64_t, SuperVector> TwistedLatticeModule::delta_expansion(const SuperVector& v) const {
    const auto& s = algebra_->space();
    const auto& lat = algebra_->lattice();
    const std::size_t r = lat.rank();
    const int k = twist_.k();
    const std::int64_t depth = heisenberg_weight(v).ceil();
    ensure_constants(static_cast<int>(depth));
    DeltaConstants consts = [&] {
        std::lock_guard<std::mutex> lock(constants_mutex_);
        return *constants_;
    }();
    CycMatrix g(r, std::vector<Cyclotomic>(r));
    for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t j = 0; j < r; ++j) g[i][j] = Cyclotomic(static_cast<long>(lat.gram()[i][j]));
    }
    const CycMatrix ginv = inverse(g);
    // Casimir pieces sum_ab G^{-1}_ab (nu^{-r} alpha_a) (x) alpha_b.
    std::vector<std::vector<std::pair<HVector, HVector>>> casimir(static_cast<std::size_t>(k));
    for (int t = 0; t < k; ++t) {
        for (std::size_t a = 0; a < r; ++a) {
            const IntVec img = twist_.apply(lat.basis_vector(a), -t);
            for (std::size_t b = 0; b < r; ++b) {
                if (ginv[a][b].is_zero()) continue;
                HVector left;
                for (std::size_t x = 0; x < r; ++x) {
                    if (img[x] != 0) left[static_cast<int>(x)] = ginv[a][b] * Cyclotomic(static_cast<long>(img[x]));
                }
                casimir[static_cast<std::size_t>(t)].push_back({left, HVector{{static_cast<int>(b), Cyclotomic(1)}}});
            }
        }
    }
    auto delta = [&](const std::map<std::int64_t, SuperVector>& in) {
        std::map<std::int64_t, SuperVector> out;
        for (const auto& [d, vec] : in) {
            const std::int64_t budget = heisenberg_weight(vec).floor();
            for (std::int64_t m = 0; m <= budget; ++m) {
                for (std::int64_t n = 0; m + n <= budget; ++n) {
                    if (m + n == 0) continue;
                    for (int t = 0; t < k; ++t) {
                        const Cyclotomic& c = consts(static_cast<int>(m), static_cast<int>(n), t);
                        if (c.is_zero()) continue;
                        for (const auto& [left, right] : casimir[static_cast<std::size_t>(t)]) {
                            SuperVector y = s.apply(right, Rat(n), vec);
                            if (y.is_zero()) continue;
                            y = s.apply(left, Rat(m), y);
                            if (!y.is_zero()) out[d + m + n] += y * c;
                        }
                    }
                }
            }
        }
        return out;
    };
    std::map<std::int64_t, SuperVector> total{{0, v}};
    std::map<std::int64_t, SuperVector> cur{{0, v}};
    for (std::int64_t j = 1; j <= depth && !cur.empty(); ++j) {
        cur = delta(cur);
        for (auto& [d, vec] : cur) {
            vec *= Cyclotomic(mpq_class(1, j));
            total[d] += vec;
        }
        for (auto it = cur.begin(); it != cur.end();) it = it->second.is_zero() ? cur.erase(it) : std::next(it);
    }
    for (auto it = total.begin(); it != total.end();) it = it->second.is_zero() ? total.erase(it) : std::next(it);
    return total;
}

SuperVector TwistedLatticeModule::plain_mode(const Monomial& v, Rat n, const SuperVector& w) const {
    const auto& lat = algebra_->lattice();
    const IntVec& beta = v.sector;
    const std::int64_t norm = lat.norm(beta);
    const Cyclotomic pre = Cyclotomic::sqrt_int(twist_.k()).pow(-norm) * rho_factor(lat, twist_, beta);
    const Cyclotomic chi_beta = chi_(beta) * section_factor(beta);
    FieldEngine engine{*space_,
                       twist_.k(),
                       proj_,
                       [chi_beta](const IntVec&, const SuperVector& x) { return x * chi_beta; },
                       [norm](const IntVec&, const Monomial&) { return Rat(-norm, 2); },
                       pre};
    SuperVector out;
    for (const auto& [wm, wc] : w.terms()) out += engine.run(v, n, wm, wc);
    return out;
}

SuperVector TwistedLatticeModule::monomial_mode(const Monomial& v, Rat n, const SuperVector& w) const {
    SuperVector out;
    for (const auto& [d, vd] : delta_expansion(SuperVector(v, Cyclotomic(1)))) {
        for (const auto& [m, c] : vd.terms()) out += plain_mode(m, n - Rat(d), w) * c;
    }
    return out;
}

TwistedLatticePtr build_twisted_lattice_module(LatticePtr algebra, const IsometryTwist& twist, const ChiCharacter& chi,
                                               std::string name) {
    return std::make_shared<const TwistedLatticeModule>(std::move(algebra), twist, chi, std::move(name));
}

}  // namespace vosa
