#include "vosa/superfock.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace vosa {

void SuperVector::add(const Monomial& m, const Cyclotomic& c) {
    if (c.is_zero()) return;
    auto it = terms_.find(m);
    if (it == terms_.end()) {
        terms_.emplace(m, c);
        return;
    }
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
}

void SuperVector::add(Monomial&& m, const Cyclotomic& c) {
    if (c.is_zero()) return;
    auto it = terms_.find(m);
    if (it == terms_.end()) {
        terms_.emplace(std::move(m), c);
        return;
    }
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
}

Cyclotomic SuperVector::coeff(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Cyclotomic() : it->second;
}

SuperVector& SuperVector::operator+=(const SuperVector& o) {
    for (const auto& [m, c] : o.terms_) add(m, c);
    return *this;
}

SuperVector& SuperVector::operator-=(const SuperVector& o) {
    for (const auto& [m, c] : o.terms_) add(m, -c);
    return *this;
}

SuperVector& SuperVector::operator*=(const Cyclotomic& c) {
    if (c.is_zero()) {
        terms_.clear();
        return *this;
    }
    for (auto& [m, v] : terms_) v *= c;
    return *this;
}

FockSpace::FockSpace(std::string name, std::vector<Generator> gens, std::vector<std::vector<Cyclotomic>> form,
                     Rat weight_offset, Rat central_charge)
    : name_(std::move(name)),
      gens_(std::move(gens)),
      form_(std::move(form)),
      offset_(weight_offset),
      central_charge_(central_charge) {
    if (form_.size() != gens_.size()) throw std::invalid_argument("FockSpace: form size mismatch");
    for (auto& row : form_) {
        if (row.size() != gens_.size()) throw std::invalid_argument("FockSpace: form is not square");
    }
    for (auto& g : gens_) {
        Rat c = g.level_class;
        g.level_class = c - Rat(c.floor());
        if (g.zero == ZeroMode::sector && g.stats != Statistics::bosonic) {
            throw std::invalid_argument("FockSpace: sector zero modes must be bosonic");
        }
    }
}

void FockSpace::set_lattice(std::vector<std::vector<std::int64_t>> gram, std::vector<std::vector<Cyclotomic>> pairing) {
    if (pairing.size() != gens_.size()) throw std::invalid_argument("set_lattice: pairing needs one row per generator");
    for (const auto& row : pairing) {
        if (row.size() != gram.size()) throw std::invalid_argument("set_lattice: pairing row has wrong rank");
    }
    gram_ = std::move(gram);
    pairing_ = std::move(pairing);
}

int FockSpace::find_generator(const std::string& name) const {
    for (std::size_t g = 0; g < gens_.size(); ++g) {
        if (gens_[g].name == name) return static_cast<int>(g);
    }
    return -1;
}

Cyclotomic FockSpace::form(const HVector& a, const HVector& b) const {
    Cyclotomic s;
    for (const auto& [i, ci] : a) {
        for (const auto& [j, cj] : b) {
            const auto& f = form(i, j);
            if (!f.is_zero()) s += ci * cj * f;
        }
    }
    return s;
}

std::int64_t FockSpace::lattice_form(const std::vector<std::int64_t>& a, const std::vector<std::int64_t>& b) const {
    std::int64_t s = 0;
    for (std::size_t i = 0; i < gram_.size(); ++i) {
        for (std::size_t j = 0; j < gram_.size(); ++j) s += a[i] * gram_[i][j] * b[j];
    }
    return s;
}

Cyclotomic FockSpace::pairing(int gen, const std::vector<std::int64_t>& beta) const {
    Cyclotomic s;
    if (pairing_.empty()) return s;
    const auto& row = pairing_[static_cast<std::size_t>(gen)];
    for (std::size_t i = 0; i < beta.size(); ++i) {
        if (beta[i] != 0) s += row[i] * Cyclotomic(static_cast<long>(beta[i]));
    }
    return s;
}

bool FockSpace::admissible(int gen, Rat level) const {
    if (gen < 0 || gen >= num_generators()) return false;
    const auto& g = gens_[static_cast<std::size_t>(gen)];
    if (!(level - g.level_class).is_integer()) return false;
    return !(level.is_zero() && g.zero == ZeroMode::none);
}

bool FockSpace::is_creation(const Mode& m) const {
    if (m.level < Rat(0)) return true;
    if (!m.level.is_zero()) return false;
    auto z = gens_[static_cast<std::size_t>(m.gen)].zero;
    return z == ZeroMode::create || z == ZeroMode::clifford;
}

Monomial FockSpace::vacuum_monomial(std::vector<std::int64_t> sector) const {
    Monomial m;
    if (has_lattice()) {
        if (sector.empty()) sector.assign(gram_.size(), 0);
        if (sector.size() != gram_.size()) throw std::invalid_argument("vacuum: sector has wrong rank");
        m.sector = std::move(sector);
    } else if (!sector.empty()) {
        throw std::invalid_argument("vacuum: this space has no lattice");
    }
    return m;
}

SuperVector FockSpace::vacuum(std::vector<std::int64_t> sector) const {
    return SuperVector(vacuum_monomial(std::move(sector)), Cyclotomic(1L));
}

SuperVector FockSpace::state(const std::vector<Mode>& modes, std::vector<std::int64_t> sector) const {
    SuperVector v = vacuum(std::move(sector));
    for (auto it = modes.rbegin(); it != modes.rend(); ++it) v = apply(*it, v);
    return v;
}

Cyclotomic FockSpace::bracket(const Mode& a, const Mode& b) const {
    if (a.level + b.level != Rat(0)) return Cyclotomic();
    const auto& ga = gens_[static_cast<std::size_t>(a.gen)];
    const auto& gb = gens_[static_cast<std::size_t>(b.gen)];
    if (ga.stats != gb.stats) return Cyclotomic();
    const auto& f = form(a.gen, b.gen);
    if (f.is_zero()) return f;
    if (ga.stats == Statistics::fermionic) return f;
    return f * Cyclotomic(a.level);
}

void FockSpace::apply_to_monomial(const Mode& a, const Monomial& m, const Cyclotomic& c, SuperVector& out) const {
    const auto& ga = gens_[static_cast<std::size_t>(a.gen)];
    const bool odd = ga.stats == Statistics::fermionic;

    if (a.level.is_zero() && ga.zero == ZeroMode::sector) {
        out.add(m, c * pairing(a.gen, m.sector));
        return;
    }

    const bool create = is_creation(a);
    // Modes passed on the way to the insertion point contribute brackets.
    const std::size_t stop =
        create ? static_cast<std::size_t>(std::lower_bound(m.word.begin(), m.word.end(), a) - m.word.begin())
               : m.word.size();
    int sign = 1;
    for (std::size_t i = 0; i < stop; ++i) {
        const Mode& b = m.word[i];
        Cyclotomic br = bracket(a, b);
        if (!br.is_zero()) {
            Monomial r = m;
            r.word.erase(r.word.begin() + static_cast<std::ptrdiff_t>(i));
            out.add(std::move(r), c * br * Cyclotomic(static_cast<long>(sign)));
        }
        if (odd && gens_[static_cast<std::size_t>(b.gen)].stats == Statistics::fermionic) sign = -sign;
    }
    if (!create) return;  // annihilators kill the vacuum

    if (odd && stop < m.word.size() && m.word[stop] == a) {
        // a a = (1/2)[a, a]_+
        Cyclotomic br = bracket(a, a);
        if (br.is_zero()) return;
        Monomial r = m;
        r.word.erase(r.word.begin() + static_cast<std::ptrdiff_t>(stop));
        out.add(std::move(r), c * br * Cyclotomic(mpq_class(1, 2)) * Cyclotomic(static_cast<long>(sign)));
        return;
    }
    Monomial r = m;
    r.word.insert(r.word.begin() + static_cast<std::ptrdiff_t>(stop), a);
    out.add(std::move(r), c * Cyclotomic(static_cast<long>(sign)));
}

SuperVector FockSpace::apply(const Mode& m, const SuperVector& v) const {
    if (!admissible(m.gen, m.level)) {
        throw std::invalid_argument("apply: level " + m.level.str() + " is not admissible for " +
                                    (m.gen >= 0 && m.gen < num_generators() ? gens_[static_cast<std::size_t>(m.gen)].name
                                                                            : std::string("?")));
    }
    SuperVector out;
    for (const auto& [mono, c] : v.terms()) apply_to_monomial(m, mono, c, out);
    return out;
}

SuperVector FockSpace::apply(const HVector& h, Rat level, const SuperVector& v) const {
    SuperVector out;
    for (const auto& [g, coeff] : h) {
        if (coeff.is_zero() || !admissible(g, level)) continue;
        Mode m{g, level};
        for (const auto& [mono, c] : v.terms()) apply_to_monomial(m, mono, c * coeff, out);
    }
    return out;
}

Rat FockSpace::weight(const Monomial& m) const {
    Rat w = offset_;
    for (const auto& md : m.word) w -= md.level;
    if (!m.sector.empty()) w += Rat(lattice_form(m.sector, m.sector), 2);
    return w;
}

Rat FockSpace::max_weight(const SuperVector& v) const {
    if (v.is_zero()) return offset_;
    Rat best = weight(v.terms().begin()->first);
    for (const auto& [m, c] : v.terms()) best = std::max(best, weight(m));
    return best;
}

bool FockSpace::is_homogeneous(const SuperVector& v) const {
    if (v.is_zero()) return true;
    Rat w = weight(v.terms().begin()->first);
    return std::all_of(v.terms().begin(), v.terms().end(), [&](const auto& t) { return weight(t.first) == w; });
}

int FockSpace::parity(const Monomial& m) const {
    int p = 0;
    for (const auto& md : m.word) {
        if (gens_[static_cast<std::size_t>(md.gen)].stats == Statistics::fermionic) ++p;
    }
    if (!m.sector.empty()) p += static_cast<int>(lattice_form(m.sector, m.sector) & 1);
    return p & 1;
}

Parity FockSpace::parity(const SuperVector& v) const {
    if (v.is_zero()) return Parity::zero;
    int first = parity(v.terms().begin()->first);
    for (const auto& [m, c] : v.terms()) {
        if (parity(m) != first) return Parity::mixed;
    }
    return first ? Parity::odd : Parity::even;
}

SuperVector FockSpace::parity_map(const SuperVector& v) const {
    SuperVector out;
    for (const auto& [m, c] : v.terms()) out.add(m, parity(m) ? -c : c);
    return out;
}

std::vector<Mode> FockSpace::creation_modes(Rat w_max) const {
    std::vector<Mode> modes;
    const Rat budget = w_max - offset_;
    for (int g = 0; g < num_generators(); ++g) {
        const auto& gen = gens_[static_cast<std::size_t>(g)];
        // Levels <= 0 in level_class + Z, deepest first.
        for (std::int64_t j = gen.level_class.is_zero() ? 0 : 1;; ++j) {
            Mode m{g, gen.level_class - Rat(j)};
            if (-m.level > budget) break;
            if (admissible(g, m.level) && is_creation(m)) modes.push_back(m);
        }
    }
    std::sort(modes.begin(), modes.end());
    return modes;
}

std::vector<std::vector<std::int64_t>> FockSpace::sectors_up_to(Rat w_max) const {
    std::vector<std::vector<std::int64_t>> out;
    if (!has_lattice()) {
        out.emplace_back();
        return out;
    }
    const Rat budget = w_max - offset_;
    if (budget < Rat(0)) return out;
    // <b,b>/2 <= budget with <b,b> >= lambda_min |b|^2 >= |b_i|^2 / (G^{-1})_{ii}; a
    // coarse box from the trace of the adjugate suffices at rank <= 2.
    const std::size_t r = gram_.size();
    std::int64_t bound = 0;
    {
        // |b_i|^2 <= (G^{-1})_{ii} <b,b>; bound (G^{-1})_{ii} by det-adjugate for r <= 2.
        double worst = 0;
        if (r == 1) {
            worst = 1.0 / static_cast<double>(gram_[0][0]);
        } else if (r == 2) {
            double det = static_cast<double>(gram_[0][0] * gram_[1][1] - gram_[0][1] * gram_[1][0]);
            worst = std::max(static_cast<double>(gram_[1][1]), static_cast<double>(gram_[0][0])) / det;
        } else {
            worst = 1.0;  // only used with unimodular diagonal data beyond rank 2
        }
        bound = static_cast<std::int64_t>(std::sqrt(2.0 * budget.to_double() * worst)) + 1;
    }
    std::vector<std::int64_t> b(r, -bound);
    while (true) {
        if (Rat(lattice_form(b, b), 2) <= budget) out.push_back(b);
        std::size_t i = 0;
        while (i < r && b[i] == bound) b[i++] = -bound;
        if (i == r) break;
        ++b[i];
    }
    return out;
}

std::vector<Monomial> FockSpace::basis_up_to(Rat w_max) const {
    std::vector<Monomial> out;
    const auto modes = creation_modes(w_max);
    for (const auto& sector : sectors_up_to(w_max)) {
        Monomial base;
        base.sector = sector;
        const Rat start = weight(base);
        if (start > w_max) continue;
        // Depth-first over canonical words: indices are nondecreasing, strictly
        // increasing for fermionic modes.
        std::vector<Mode> word;
        auto rec = [&](auto&& self, std::size_t from, Rat w) -> void {
            Monomial m = base;
            m.word = word;
            out.push_back(std::move(m));
            for (std::size_t i = from; i < modes.size(); ++i) {
                Rat nw = w - modes[i].level;
                if (nw > w_max) continue;
                word.push_back(modes[i]);
                bool odd = gens_[static_cast<std::size_t>(modes[i].gen)].stats == Statistics::fermionic;
                self(self, odd ? i + 1 : i, nw);
                word.pop_back();
            }
        };
        rec(rec, 0, start);
    }
    std::sort(out.begin(), out.end(), [&](const Monomial& a, const Monomial& b) {
        Rat wa = weight(a), wb = weight(b);
        if (wa != wb) return wa < wb;
        return a < b;
    });
    return out;
}

std::vector<Monomial> FockSpace::basis_at(Rat w) const {
    std::vector<Monomial> out;
    for (auto& m : basis_up_to(w)) {
        if (weight(m) == w) out.push_back(std::move(m));
    }
    return out;
}

PuiseuxSeries FockSpace::graded_dimension(Rat trunc, bool super) const {
    const Rat shift = central_charge_ / Rat(24);
    PuiseuxSeries s(trunc);
    for (const auto& m : basis_up_to(trunc + shift)) {
        long c = (super && parity(m)) ? -1 : 1;
        s.add_term(weight(m) - shift, Cyclotomic(c));
    }
    return s;
}

std::string FockSpace::format(const Mode& m) const {
    const std::string lv = m.level.is_integer() ? std::to_string(m.level.num()) : m.level.str();
    return gens_[static_cast<std::size_t>(m.gen)].name + "(" + lv + ")";
}

std::string FockSpace::format(const Monomial& m) const {
    std::ostringstream os;
    for (const auto& md : m.word) os << format(md) << " ";
    if (!m.sector.empty()) {
        os << "e^(";
        for (std::size_t i = 0; i < m.sector.size(); ++i) os << (i ? "," : "") << m.sector[i];
        os << ") ";
    }
    os << "|0>";
    if (m.summand != 0) os << "[" << m.summand << "]";
    return os.str();
}

std::string FockSpace::format(const SuperVector& v) const {
    if (v.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : v.terms()) {
        if (!first) os << " + ";
        first = false;
        os << "(" << c.short_str() << ") " << format(m);
    }
    return os.str();
}

int normal_order_sign(const FockSpace& space, std::vector<Mode>& modes) {
    // Stable insertion sort by level; count swaps of two fermions.
    int sign = 1;
    for (std::size_t i = 1; i < modes.size(); ++i) {
        for (std::size_t j = i; j > 0 && modes[j].level < modes[j - 1].level; --j) {
            std::swap(modes[j], modes[j - 1]);
            if (space.generator(modes[j].gen).stats == Statistics::fermionic &&
                space.generator(modes[j - 1].gen).stats == Statistics::fermionic) {
                sign = -sign;
            }
        }
    }
    return sign;
}

}  // namespace vosa
