#pragma once
// Exact elements of Q(zeta_n).  Coordinates are kept reduced modulo the n-th
// cyclotomic polynomial, so equal values have identical coordinates once both
// sides live in the same field.  Values silently move to a smaller field when
// possible (rationals always sit at order 1) and are embedded into the lcm
// order when combined.

#include <complex>
#include <gmpxx.h>
#include <string>
#include <vector>

#include "vosa/rational.hpp"

namespace vosa {

class Cyclotomic {
public:
    Cyclotomic() : order_(1), c_(1) {}
    Cyclotomic(long v) : order_(1), c_{mpq_class(v)} {}  // NOLINT: scalars convert implicitly
    Cyclotomic(int v) : Cyclotomic(static_cast<long>(v)) {}  // NOLINT
    Cyclotomic(const mpq_class& q) : order_(1), c_{q} { c_[0].canonicalize(); }  // NOLINT
    Cyclotomic(const Rat& q) : order_(1), c_{q.to_mpq()} {}  // NOLINT
    // From reduced or unreduced coordinates sum coords[j] zeta_n^j (any length).
    Cyclotomic(int n, std::vector<mpq_class> coords);

    static Cyclotomic root(int n, long j);
    // zeta_n^{n/8} + zeta_n^{-n/8}; requires 8 | n.
    static Cyclotomic sqrt2(int n = 8);
    // Positive square root of n >= 1.
    static Cyclotomic sqrt_int(long n);
    static Cyclotomic i() { return root(4, 1); }

    int order() const { return order_; }
    // Reduced coordinates, length phi(order()).
    const std::vector<mpq_class>& coords() const { return c_; }
    // Coordinates after embedding into Q(zeta_m); m must be a multiple of order().
    std::vector<mpq_class> coords_in(int m) const;
    Cyclotomic embed(int m) const;

    bool is_zero() const;
    bool is_one() const;
    bool is_rational() const { return order_ == 1; }
    mpq_class rational() const;  // throws unless is_rational()

    Cyclotomic operator-() const;
    Cyclotomic& operator+=(const Cyclotomic& o);
    Cyclotomic& operator-=(const Cyclotomic& o);
    Cyclotomic& operator*=(const Cyclotomic& o);
    Cyclotomic& operator/=(const Cyclotomic& o);
    friend Cyclotomic operator+(Cyclotomic a, const Cyclotomic& b) { return a += b; }
    friend Cyclotomic operator-(Cyclotomic a, const Cyclotomic& b) { return a -= b; }
    friend Cyclotomic operator*(Cyclotomic a, const Cyclotomic& b) { return a *= b; }
    friend Cyclotomic operator/(Cyclotomic a, const Cyclotomic& b) { return a /= b; }
    friend bool operator==(const Cyclotomic& a, const Cyclotomic& b);

    Cyclotomic inverse() const;
    Cyclotomic pow(long e) const;
    // Complex conjugation (zeta -> zeta^{-1}).
    Cyclotomic conj() const;

    std::complex<double> approx() const;
    // "c0 + c1*z + c2*z^2 (z = zeta_n)", zero terms omitted.
    std::string str() const;
    // Rationals as "p/q", others as str().
    std::string short_str() const;

private:
    void normalize();  // shrink to the smallest field containing the value
    int order_;
    std::vector<mpq_class> c_;
};

int euler_phi(int n);
// Integer coefficients of the n-th cyclotomic polynomial, low degree first.
const std::vector<long>& cyclotomic_polynomial(int n);

// Enumerated operation for the generic arithmetic entry point.
enum class CycOp { add, sub, mul, div };
Cyclotomic cyc_arith(const Cyclotomic& a, const Cyclotomic& b, CycOp op);

}  // namespace vosa
