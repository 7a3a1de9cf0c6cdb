#include "vosa/rational.hpp"

#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace vosa {

namespace {

__int128 gcd128(__int128 a, __int128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        __int128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

}  // namespace

std::int64_t gcd64(std::int64_t a, std::int64_t b) { return std::gcd(a, b); }

std::int64_t lcm64(std::int64_t a, std::int64_t b) {
    if (a == 0 || b == 0) return 0;
    return std::lcm(a, b);
}

Rat::Rat(std::int64_t n, std::int64_t d) { *this = make(n, d); }

Rat Rat::make(__int128 n, __int128 d) {
    if (d == 0) throw std::domain_error("Rat: zero denominator");
    if (d < 0) {
        n = -n;
        d = -d;
    }
    __int128 g = gcd128(n, d);
    if (g > 1) {
        n /= g;
        d /= g;
    }
    constexpr auto lo = std::numeric_limits<std::int64_t>::min();
    constexpr auto hi = std::numeric_limits<std::int64_t>::max();
    if (n < lo || n > hi || d > hi) throw std::overflow_error("Rat: overflow");
    Rat r;
    r.num_ = static_cast<std::int64_t>(n);
    r.den_ = static_cast<std::int64_t>(d);
    return r;
}

std::int64_t Rat::floor() const {
    std::int64_t q = num_ / den_;
    if (num_ % den_ != 0 && num_ < 0) --q;
    return q;
}

std::int64_t Rat::ceil() const { return -(-*this).floor(); }

std::int64_t Rat::to_int() const {
    if (den_ != 1) throw std::domain_error("Rat: not an integer: " + str());
    return num_;
}

mpq_class Rat::to_mpq() const {
    mpq_class q(mpz_class(static_cast<long>(num_)), mpz_class(static_cast<long>(den_)));
    q.canonicalize();
    return q;
}

Rat& Rat::operator+=(const Rat& o) {
    *this = make(static_cast<__int128>(num_) * o.den_ + static_cast<__int128>(o.num_) * den_,
                 static_cast<__int128>(den_) * o.den_);
    return *this;
}

Rat& Rat::operator-=(const Rat& o) { return *this += -o; }

Rat& Rat::operator*=(const Rat& o) {
    *this = make(static_cast<__int128>(num_) * o.num_, static_cast<__int128>(den_) * o.den_);
    return *this;
}

Rat& Rat::operator/=(const Rat& o) {
    *this = make(static_cast<__int128>(num_) * o.den_, static_cast<__int128>(den_) * o.num_);
    return *this;
}

std::strong_ordering operator<=>(const Rat& a, const Rat& b) {
    __int128 l = static_cast<__int128>(a.num_) * b.den_;
    __int128 r = static_cast<__int128>(b.num_) * a.den_;
    if (l < r) return std::strong_ordering::less;
    if (l > r) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

std::string Rat::str() const { return std::to_string(num_) + "/" + std::to_string(den_); }

Rat Rat::parse(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("empty rational");
    auto slash = s.find('/');
    if (slash != std::string::npos) {
        return Rat(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
    }
    auto dot = s.find('.');
    if (dot != std::string::npos) {
        std::string frac = s.substr(dot + 1);
        std::int64_t den = 1;
        for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
        std::string whole = s.substr(0, dot);
        bool neg = !whole.empty() && whole[0] == '-';
        std::int64_t w = (whole.empty() || whole == "-") ? 0 : std::stoll(whole);
        std::int64_t f = frac.empty() ? 0 : std::stoll(frac);
        std::int64_t n = std::llabs(w) * den + f;
        return Rat(neg ? -n : n, den);
    }
    std::size_t used = 0;
    long long v = std::stoll(s, &used);
    if (used != s.size()) throw std::invalid_argument("bad rational: " + s);
    return Rat(v);
}

std::ostream& operator<<(std::ostream& os, const Rat& r) { return os << r.str(); }

mpq_class binom(const mpq_class& x, std::int64_t k) {
    if (k < 0) return 0;
    mpq_class r = 1;
    for (std::int64_t i = 0; i < k; ++i) {
        r *= (x - i);
        r /= (i + 1);
    }
    return r;
}

mpq_class binom(const Rat& x, std::int64_t k) { return binom(x.to_mpq(), k); }

std::string mpq_str(const mpq_class& q) {
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

}  // namespace vosa
