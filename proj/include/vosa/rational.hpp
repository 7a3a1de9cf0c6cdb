#pragma once
// Small exact rationals for exponents, levels and weights.  Coefficients use
// GMP (see cyclotomic.hpp); these stay machine-sized and overflow is an error.

#include <compare>
#include <cstdint>
#include <functional>
#include <gmpxx.h>
#include <iosfwd>
#include <string>

namespace vosa {

class Rat {
public:
    constexpr Rat() = default;
    constexpr Rat(std::int64_t n) : num_(n), den_(1) {}  // NOLINT: implicit from integers is intended
    Rat(std::int64_t n, std::int64_t d);

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }

    bool is_integer() const { return den_ == 1; }
    bool is_zero() const { return num_ == 0; }
    std::int64_t floor() const;
    std::int64_t ceil() const;
    // Exact integer value; throws if not an integer.
    std::int64_t to_int() const;
    double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
    mpq_class to_mpq() const;

    Rat operator-() const { return Rat(-num_, den_); }
    Rat& operator+=(const Rat& o);
    Rat& operator-=(const Rat& o);
    Rat& operator*=(const Rat& o);
    Rat& operator/=(const Rat& o);
    friend Rat operator+(Rat a, const Rat& b) { return a += b; }
    friend Rat operator-(Rat a, const Rat& b) { return a -= b; }
    friend Rat operator*(Rat a, const Rat& b) { return a *= b; }
    friend Rat operator/(Rat a, const Rat& b) { return a /= b; }

    friend bool operator==(const Rat& a, const Rat& b) = default;
    friend std::strong_ordering operator<=>(const Rat& a, const Rat& b);

    // "p/q" always, e.g. "3/1", "-1/48".
    std::string str() const;
    // Accepts "p", "p/q", or a decimal like "2.5".
    static Rat parse(const std::string& s);

private:
    static Rat make(__int128 n, __int128 d);
    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

std::ostream& operator<<(std::ostream& os, const Rat& r);

std::int64_t gcd64(std::int64_t a, std::int64_t b);
std::int64_t lcm64(std::int64_t a, std::int64_t b);

// Generalized binomial coefficient binom(x, k) for rational x, k >= 0.
mpq_class binom(const mpq_class& x, std::int64_t k);
mpq_class binom(const Rat& x, std::int64_t k);

// "p/q" rendering of a GMP rational, always with the slash.
std::string mpq_str(const mpq_class& q);

}  // namespace vosa

template <>
struct std::hash<vosa::Rat> {
    std::size_t operator()(const vosa::Rat& r) const noexcept {
        return std::hash<std::int64_t>{}(r.num()) * 1000003u ^ std::hash<std::int64_t>{}(r.den());
    }
};
