#pragma once
// Truncated Puiseux series in q with cyclotomic coefficients.  The truncation
// is an exponent bound: terms with exponent above trunc() are not known and are
// never stored.

#include <map>
#include <string>

#include <json.hpp>

#include "vosa/cyclotomic.hpp"
#include "vosa/rational.hpp"

namespace vosa {

class PuiseuxSeries {
public:
    explicit PuiseuxSeries(Rat trunc = Rat(10)) : trunc_(trunc) {}
    static PuiseuxSeries monomial(const Cyclotomic& c, Rat exp, Rat trunc);
    static PuiseuxSeries constant(const Cyclotomic& c, Rat trunc) { return monomial(c, Rat(0), trunc); }

    Rat trunc() const { return trunc_; }
    // Exponents lie in offset() + (1/denom())Z.
    std::int64_t denom() const { return denom_; }
    Rat offset() const { return offset_; }
    const std::map<Rat, Cyclotomic>& terms() const { return coeffs_; }
    bool is_zero() const { return coeffs_.empty(); }

    Cyclotomic coeff(Rat exp) const;
    // Adds c q^exp; silently ignored when exp > trunc().
    void add_term(Rat exp, const Cyclotomic& c);
    // Lowest stored exponent; throws on the zero series.
    Rat leading_exponent() const;

    PuiseuxSeries truncated(Rat t) const;
    PuiseuxSeries shifted(Rat by) const;  // q^by * f

    PuiseuxSeries operator-() const;
    PuiseuxSeries& operator+=(const PuiseuxSeries& o);
    PuiseuxSeries& operator-=(const PuiseuxSeries& o);
    PuiseuxSeries& operator*=(const Cyclotomic& c);
    friend PuiseuxSeries operator+(PuiseuxSeries a, const PuiseuxSeries& b) { return a += b; }
    friend PuiseuxSeries operator-(PuiseuxSeries a, const PuiseuxSeries& b) { return a -= b; }
    friend PuiseuxSeries operator*(const PuiseuxSeries& a, const PuiseuxSeries& b);
    friend PuiseuxSeries operator*(PuiseuxSeries a, const Cyclotomic& c) { return a *= c; }
    friend PuiseuxSeries operator*(const Cyclotomic& c, PuiseuxSeries a) { return a *= c; }
    friend PuiseuxSeries operator/(const PuiseuxSeries& a, const PuiseuxSeries& b);

    // Multiplicative inverse of a series with nonzero leading coefficient.
    PuiseuxSeries inverse() const;
    PuiseuxSeries pow(unsigned e) const;

    // One "p/q : coeff" line per term, sorted by exponent.
    std::string text() const;
    nlohmann::json to_json() const;

private:
    void reindex(Rat exp);
    std::int64_t denom_ = 1;
    Rat offset_ = Rat(0);
    Rat trunc_;
    std::map<Rat, Cyclotomic> coeffs_;
};

enum class SeriesOp { add, mul };
PuiseuxSeries series_arith(const PuiseuxSeries& f, const PuiseuxSeries& g, SeriesOp op);

// f(q^{1/k})
PuiseuxSeries substitute_root(const PuiseuxSeries& f, std::int64_t k);
// f(q^k)
PuiseuxSeries substitute_power(const PuiseuxSeries& f, std::int64_t k);

// q^{1/24} prod_{n>=1} (1 - q^n)
PuiseuxSeries eta_series(Rat trunc);

enum class Weber { f, f1, f2 };
PuiseuxSeries weber(Weber which, Rat trunc);

// Coefficients agree for every exponent <= t.  Both truncations must reach t.
bool series_eq(const PuiseuxSeries& f, const PuiseuxSeries& g, Rat t);

}  // namespace vosa
