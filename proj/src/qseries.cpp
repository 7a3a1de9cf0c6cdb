#include "vosa/qseries.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace vosa {

namespace {

Rat mod_step(Rat x, std::int64_t n) {
    // x reduced into [0, 1/n).
    Rat scaled = x * Rat(n);
    return (scaled - Rat(scaled.floor())) / Rat(n);
}

}  // namespace

PuiseuxSeries PuiseuxSeries::monomial(const Cyclotomic& c, Rat exp, Rat trunc) {
    PuiseuxSeries s(trunc);
    s.add_term(exp, c);
    return s;
}

void PuiseuxSeries::reindex(Rat exp) {
    if (coeffs_.empty()) {
        denom_ = 1;
        offset_ = mod_step(exp, 1);
        return;
    }
    Rat diff = exp - offset_;
    std::int64_t n = lcm64(denom_, diff.den());
    if (n != denom_) denom_ = n;
    offset_ = mod_step(offset_, denom_);
}

Cyclotomic PuiseuxSeries::coeff(Rat exp) const {
    auto it = coeffs_.find(exp);
    return it == coeffs_.end() ? Cyclotomic() : it->second;
}

void PuiseuxSeries::add_term(Rat exp, const Cyclotomic& c) {
    if (exp > trunc_ || c.is_zero()) return;
    auto it = coeffs_.find(exp);
    if (it == coeffs_.end()) {
        reindex(exp);
        coeffs_.emplace(exp, c);
        return;
    }
    it->second += c;
    if (it->second.is_zero()) coeffs_.erase(it);
}

Rat PuiseuxSeries::leading_exponent() const {
    if (coeffs_.empty()) throw std::domain_error("leading_exponent of zero series");
    return coeffs_.begin()->first;
}

PuiseuxSeries PuiseuxSeries::truncated(Rat t) const {
    PuiseuxSeries r(std::min(t, trunc_));
    for (const auto& [e, c] : coeffs_) r.add_term(e, c);
    return r;
}

PuiseuxSeries PuiseuxSeries::shifted(Rat by) const {
    PuiseuxSeries r(trunc_ + by);
    for (const auto& [e, c] : coeffs_) r.add_term(e + by, c);
    return r;
}

PuiseuxSeries PuiseuxSeries::operator-() const {
    PuiseuxSeries r(trunc_);
    for (const auto& [e, c] : coeffs_) r.add_term(e, -c);
    return r;
}

PuiseuxSeries& PuiseuxSeries::operator+=(const PuiseuxSeries& o) {
    if (o.trunc_ < trunc_) *this = truncated(o.trunc_);
    for (const auto& [e, c] : o.coeffs_) add_term(e, c);
    return *this;
}

PuiseuxSeries& PuiseuxSeries::operator-=(const PuiseuxSeries& o) { return *this += -o; }

PuiseuxSeries& PuiseuxSeries::operator*=(const Cyclotomic& c) {
    if (c.is_zero()) {
        coeffs_.clear();
        denom_ = 1;
        offset_ = Rat(0);
        return *this;
    }
    for (auto& [e, v] : coeffs_) v *= c;
    return *this;
}

PuiseuxSeries operator*(const PuiseuxSeries& a, const PuiseuxSeries& b) {
    // A negative leading exponent on one side lowers the reliable range of
    // the product below min(T_a, T_b).
    Rat t = std::min(a.trunc_, b.trunc_);
    if (!a.is_zero()) t = std::min(t, b.trunc_ + a.leading_exponent());
    if (!b.is_zero()) t = std::min(t, a.trunc_ + b.leading_exponent());
    PuiseuxSeries r(t);
    if (a.is_zero() || b.is_zero()) return r;
    for (const auto& [ea, ca] : a.coeffs_) {
        for (const auto& [eb, cb] : b.coeffs_) {
            Rat e = ea + eb;
            if (e > r.trunc_) break;
            r.add_term(e, ca * cb);
        }
    }
    return r;
}

PuiseuxSeries PuiseuxSeries::inverse() const {
    if (coeffs_.empty()) throw std::domain_error("inverse of zero series");
    const Rat e0 = leading_exponent();
    const Cyclotomic c0inv = coeffs_.begin()->second.inverse();
    const Rat rel = trunc_ - e0;  // relative precision of the unit part
    // Unit part u = f / (c0 q^e0) on the grid (1/N)Z.
    const std::int64_t n = denom_;
    const std::int64_t steps = (rel * Rat(n)).floor();
    std::vector<Cyclotomic> a(static_cast<std::size_t>(steps) + 1);
    for (const auto& [e, c] : coeffs_) {
        Rat d = (e - e0) * Rat(n);
        std::int64_t idx = d.to_int();
        if (idx <= steps) a[static_cast<std::size_t>(idx)] = c * c0inv;
    }
    std::vector<Cyclotomic> b(static_cast<std::size_t>(steps) + 1);
    b[0] = Cyclotomic(1L);
    for (std::int64_t i = 1; i <= steps; ++i) {
        Cyclotomic acc;
        for (std::int64_t j = 1; j <= i; ++j) {
            const auto& aj = a[static_cast<std::size_t>(j)];
            if (aj.is_zero()) continue;
            const auto& bij = b[static_cast<std::size_t>(i - j)];
            if (bij.is_zero()) continue;
            acc -= aj * bij;
        }
        b[static_cast<std::size_t>(i)] = acc;
    }
    PuiseuxSeries r(trunc_ - e0 - e0);
    for (std::int64_t i = 0; i <= steps; ++i) {
        if (b[static_cast<std::size_t>(i)].is_zero()) continue;
        r.add_term(-e0 + Rat(i, n), b[static_cast<std::size_t>(i)] * c0inv);
    }
    return r;
}

PuiseuxSeries operator/(const PuiseuxSeries& a, const PuiseuxSeries& b) { return a * b.inverse(); }

PuiseuxSeries PuiseuxSeries::pow(unsigned e) const {
    PuiseuxSeries r = constant(Cyclotomic(1L), trunc_);
    for (unsigned i = 0; i < e; ++i) r = r * *this;
    return r;
}

std::string PuiseuxSeries::text() const {
    std::ostringstream os;
    for (const auto& [e, c] : coeffs_) os << e.str() << " : " << c.str() << "\n";
    return os.str();
}

nlohmann::json PuiseuxSeries::to_json() const {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& [e, c] : coeffs_) {
        nlohmann::json coeff = nlohmann::json::array();
        for (const auto& x : c.coords()) coeff.push_back(mpq_str(x));
        arr.push_back({{"exp", e.str()}, {"order", c.order()}, {"coeff", coeff}});
    }
    return arr;
}

PuiseuxSeries series_arith(const PuiseuxSeries& f, const PuiseuxSeries& g, SeriesOp op) {
    return op == SeriesOp::add ? f + g : f * g;
}

PuiseuxSeries substitute_root(const PuiseuxSeries& f, std::int64_t k) {
    if (k < 1) throw std::invalid_argument("substitute_root: k must be positive");
    PuiseuxSeries r(f.trunc() / Rat(k));
    for (const auto& [e, c] : f.terms()) r.add_term(e / Rat(k), c);
    return r;
}

PuiseuxSeries substitute_power(const PuiseuxSeries& f, std::int64_t k) {
    if (k < 1) throw std::invalid_argument("substitute_power: k must be positive");
    PuiseuxSeries r(f.trunc() * Rat(k));
    for (const auto& [e, c] : f.terms()) r.add_term(e * Rat(k), c);
    return r;
}

namespace {

// prod_{n >= 1} (1 + sign q^{n + shift}) up to exponent t, as a plain series.
PuiseuxSeries product_one_plus(long sign, Rat shift, Rat t) {
    PuiseuxSeries p = PuiseuxSeries::constant(Cyclotomic(1L), t);
    for (std::int64_t n = 1;; ++n) {
        Rat e = Rat(n) + shift;
        if (e > t) break;
        PuiseuxSeries factor = PuiseuxSeries::constant(Cyclotomic(1L), t);
        factor.add_term(e, Cyclotomic(sign));
        p = p * factor;
    }
    return p;
}

}  // namespace

PuiseuxSeries eta_series(Rat trunc) {
    const Rat lead(1, 24);
    return product_one_plus(-1, Rat(0), trunc - lead).shifted(lead);
}

PuiseuxSeries weber(Weber which, Rat trunc) {
    switch (which) {
        case Weber::f: {
            const Rat lead(-1, 48);
            return product_one_plus(1, Rat(-1, 2), trunc - lead).shifted(lead);
        }
        case Weber::f1: {
            const Rat lead(-1, 48);
            return product_one_plus(-1, Rat(-1, 2), trunc - lead).shifted(lead);
        }
        case Weber::f2: {
            const Rat lead(1, 24);
            return product_one_plus(1, Rat(0), trunc - lead).shifted(lead) * Cyclotomic::sqrt2(8);
        }
    }
    throw std::invalid_argument("weber: bad selector");
}

bool series_eq(const PuiseuxSeries& f, const PuiseuxSeries& g, Rat t) {
    if (f.trunc() < t || g.trunc() < t) {
        throw std::invalid_argument("series_eq: truncation " + std::min(f.trunc(), g.trunc()).str() +
                                    " does not reach " + t.str());
    }
    auto it = f.terms().begin();
    auto jt = g.terms().begin();
    while (true) {
        bool fa = it != f.terms().end() && it->first <= t;
        bool ga = jt != g.terms().end() && jt->first <= t;
        if (!fa && !ga) return true;
        if (fa && ga && it->first == jt->first) {
            if (!(it->second == jt->second)) return false;
            ++it;
            ++jt;
        } else {
            return false;
        }
    }
}

}  // namespace vosa
