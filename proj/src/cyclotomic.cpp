#include "vosa/cyclotomic.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace vosa {

namespace {

std::vector<long> poly_div_exact(std::vector<long> num, const std::vector<long>& den) {
    // den is monic; returns the quotient and expects a zero remainder.
    const std::size_t dn = den.size() - 1;
    if (num.size() < den.size()) return {};
    std::vector<long> q(num.size() - dn, 0);
    for (std::size_t i = num.size(); i-- > dn;) {
        long coef = num[i];
        q[i - dn] = coef;
        if (coef == 0) continue;
        for (std::size_t j = 0; j <= dn; ++j) num[i - dn + j] -= coef * den[j];
    }
    return q;
}

// Reduce p in place modulo the monic polynomial phi (low degree first).
void reduce_mod(std::vector<mpq_class>& p, const std::vector<long>& phi) {
    const std::size_t d = phi.size() - 1;
    for (std::size_t i = p.size(); i-- > d;) {
        if (sgn(p[i]) == 0) continue;
        mpq_class coef = p[i];
        for (std::size_t j = 0; j <= d; ++j) {
            if (phi[j] != 0) p[i - d + j] -= coef * phi[j];
        }
    }
    if (p.size() > d) p.resize(d);
    while (p.size() < d) p.emplace_back(0);
}

}  // namespace

int euler_phi(int n) {
    if (n < 1) throw std::invalid_argument("euler_phi: n < 1");
    int result = n;
    int m = n;
    for (int p = 2; p * p <= m; ++p) {
        if (m % p == 0) {
            while (m % p == 0) m /= p;
            result -= result / p;
        }
    }
    if (m > 1) result -= result / m;
    return result;
}

const std::vector<long>& cyclotomic_polynomial(int n) {
    static std::mutex mu;
    static std::map<int, std::vector<long>> cache;
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(n);
        if (it != cache.end()) return it->second;
    }
    if (n < 1) throw std::invalid_argument("cyclotomic_polynomial: n < 1");
    std::vector<long> p(static_cast<std::size_t>(n) + 1, 0);
    p[0] = -1;
    p[static_cast<std::size_t>(n)] = 1;
    for (int d = 1; d < n; ++d) {
        if (n % d == 0) p = poly_div_exact(p, cyclotomic_polynomial(d));
    }
    std::lock_guard<std::mutex> lock(mu);
    return cache.emplace(n, std::move(p)).first->second;
}

Cyclotomic::Cyclotomic(int n, std::vector<mpq_class> coords) : order_(n) {
    if (n < 1) throw std::invalid_argument("Cyclotomic: order must be positive");
    // Fold modulo x^n - 1 first, then reduce by the cyclotomic polynomial.
    std::vector<mpq_class> folded(static_cast<std::size_t>(n));
    for (std::size_t j = 0; j < coords.size(); ++j) folded[j % static_cast<std::size_t>(n)] += coords[j];
    reduce_mod(folded, cyclotomic_polynomial(n));
    c_ = std::move(folded);
    normalize();
}

void Cyclotomic::normalize() {
    if (order_ == 1) return;
    for (std::size_t j = 1; j < c_.size(); ++j) {
        if (sgn(c_[j]) != 0) return;
    }
    mpq_class v = c_.empty() ? mpq_class(0) : c_[0];
    order_ = 1;
    c_.assign(1, v);
}

Cyclotomic Cyclotomic::root(int n, long j) {
    if (n < 1) throw std::invalid_argument("cyc_root: n must be positive");
    long e = j % n;
    if (e < 0) e += n;
    std::vector<mpq_class> v(static_cast<std::size_t>(e) + 1);
    v[static_cast<std::size_t>(e)] = 1;
    return Cyclotomic(n, std::move(v));
}

Cyclotomic Cyclotomic::sqrt2(int n) {
    if (n % 8 != 0) throw std::invalid_argument("cyc_sqrt2: order must be divisible by 8");
    return root(n, n / 8) + root(n, -(n / 8));
}

Cyclotomic Cyclotomic::sqrt_int(long n) {
    if (n < 1) throw std::invalid_argument("cyc_sqrt_int: argument must be positive");
    Cyclotomic r(1L);
    long rest = n;
    for (long p = 2; p * p <= rest || rest > 1; ++p) {
        if (p * p > rest) p = rest;  // remaining prime factor
        int e = 0;
        while (rest % p == 0) {
            rest /= p;
            ++e;
        }
        if (e == 0) continue;
        for (int j = 0; j < e / 2; ++j) r *= Cyclotomic(p);
        if (e % 2 == 0) continue;
        if (p == 2) {
            r *= sqrt2(8);
            continue;
        }
        // Quadratic Gauss sum g = sum (j/p) zeta_p^j, with g = sqrt(p) for
        // p = 1 mod 4 and g = i sqrt(p) for p = 3 mod 4.
        Cyclotomic g;
        for (long j = 1; j < p; ++j) {
            bool residue = false;
            for (long x = 1; x < p; ++x) {
                if ((x * x) % p == j) {
                    residue = true;
                    break;
                }
            }
            g += residue ? root(static_cast<int>(p), j) : -root(static_cast<int>(p), j);
        }
        r *= (p % 4 == 1) ? g : -i() * g;
    }
    return r;
}

std::vector<mpq_class> Cyclotomic::coords_in(int m) const {
    if (m % order_ != 0) throw std::invalid_argument("Cyclotomic: cannot embed into order " + std::to_string(m));
    if (m == order_) return c_;
    const int t = m / order_;
    std::vector<mpq_class> v(static_cast<std::size_t>(m));
    for (std::size_t j = 0; j < c_.size(); ++j) {
        if (sgn(c_[j]) == 0) continue;
        v[(j * static_cast<std::size_t>(t)) % static_cast<std::size_t>(m)] += c_[j];
    }
    reduce_mod(v, cyclotomic_polynomial(m));
    return v;
}

Cyclotomic Cyclotomic::embed(int m) const {
    Cyclotomic r;
    r.order_ = m;
    r.c_ = coords_in(m);
    return r;
}

bool Cyclotomic::is_zero() const {
    for (const auto& x : c_) {
        if (sgn(x) != 0) return false;
    }
    return true;
}

bool Cyclotomic::is_one() const { return order_ == 1 && c_[0] == 1; }

mpq_class Cyclotomic::rational() const {
    if (order_ != 1) throw std::domain_error("Cyclotomic: value is not rational");
    return c_[0];
}

Cyclotomic Cyclotomic::operator-() const {
    Cyclotomic r = *this;
    for (auto& x : r.c_) x = -x;
    return r;
}

Cyclotomic& Cyclotomic::operator+=(const Cyclotomic& o) {
    if (o.order_ == 1) {
        c_[0] += o.c_[0];
        return *this;
    }
    const int m = static_cast<int>(lcm64(order_, o.order_));
    if (m != order_) *this = embed(m);
    auto oc = o.coords_in(m);
    for (std::size_t j = 0; j < c_.size(); ++j) c_[j] += oc[j];
    normalize();
    return *this;
}

Cyclotomic& Cyclotomic::operator-=(const Cyclotomic& o) { return *this += -o; }

Cyclotomic& Cyclotomic::operator*=(const Cyclotomic& o) {
    if (o.order_ == 1) {
        for (auto& x : c_) x *= o.c_[0];
        if (o.c_[0] == 0) normalize();
        return *this;
    }
    if (order_ == 1) {
        mpq_class s = c_[0];
        *this = o;
        for (auto& x : c_) x *= s;
        if (s == 0) normalize();
        return *this;
    }
    const int m = static_cast<int>(lcm64(order_, o.order_));
    auto a = coords_in(m);
    auto b = o.coords_in(m);
    std::vector<mpq_class> p(a.size() + b.size() - 1);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (sgn(a[i]) == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) {
            if (sgn(b[j]) == 0) continue;
            p[i + j] += a[i] * b[j];
        }
    }
    reduce_mod(p, cyclotomic_polynomial(m));
    order_ = m;
    c_ = std::move(p);
    normalize();
    return *this;
}

Cyclotomic Cyclotomic::inverse() const {
    if (is_zero()) throw std::domain_error("Cyclotomic: division by zero");
    if (order_ == 1) return Cyclotomic(mpq_class(1 / c_[0]));
    // Solve (multiplication by *this) x = 1 over Q.
    const std::size_t d = c_.size();
    std::vector<std::vector<mpq_class>> mat(d, std::vector<mpq_class>(d + 1));
    for (std::size_t col = 0; col < d; ++col) {
        std::vector<mpq_class> basis(col + 1);
        basis[col] = 1;
        Cyclotomic e(order_, basis);
        auto prod = (*this * e).coords_in(order_);
        for (std::size_t row = 0; row < d; ++row) mat[row][col] = prod[row];
    }
    mat[0][d] = 1;
    for (std::size_t col = 0; col < d; ++col) {
        std::size_t piv = col;
        while (piv < d && sgn(mat[piv][col]) == 0) ++piv;
        if (piv == d) throw std::domain_error("Cyclotomic: singular multiplication matrix");
        std::swap(mat[piv], mat[col]);
        mpq_class inv = 1 / mat[col][col];
        for (auto& x : mat[col]) x *= inv;
        for (std::size_t row = 0; row < d; ++row) {
            if (row == col || sgn(mat[row][col]) == 0) continue;
            mpq_class f = mat[row][col];
            for (std::size_t k = col; k <= d; ++k) mat[row][k] -= f * mat[col][k];
        }
    }
    std::vector<mpq_class> x(d);
    for (std::size_t row = 0; row < d; ++row) x[row] = mat[row][d];
    return Cyclotomic(order_, std::move(x));
}

Cyclotomic& Cyclotomic::operator/=(const Cyclotomic& o) { return *this *= o.inverse(); }

bool operator==(const Cyclotomic& a, const Cyclotomic& b) {
    if (a.order_ == b.order_) return a.c_ == b.c_;
    const int m = static_cast<int>(lcm64(a.order_, b.order_));
    return a.coords_in(m) == b.coords_in(m);
}

Cyclotomic Cyclotomic::pow(long e) const {
    if (e < 0) return inverse().pow(-e);
    Cyclotomic result(1L);
    Cyclotomic base = *this;
    while (e > 0) {
        if (e & 1) result *= base;
        e >>= 1;
        if (e > 0) base *= base;
    }
    return result;
}

Cyclotomic Cyclotomic::conj() const {
    if (order_ == 1) return *this;
    std::vector<mpq_class> v(static_cast<std::size_t>(order_));
    for (std::size_t j = 0; j < c_.size(); ++j) {
        v[(static_cast<std::size_t>(order_) - j) % static_cast<std::size_t>(order_)] += c_[j];
    }
    return Cyclotomic(order_, std::move(v));
}

std::complex<double> Cyclotomic::approx() const {
    std::complex<double> z = std::polar(1.0, 2.0 * std::numbers::pi / order_);
    std::complex<double> acc = 0;
    std::complex<double> p = 1;
    for (const auto& x : c_) {
        acc += x.get_d() * p;
        p *= z;
    }
    return acc;
}

std::string Cyclotomic::str() const {
    std::ostringstream os;
    bool first = true;
    for (std::size_t j = 0; j < c_.size(); ++j) {
        if (sgn(c_[j]) == 0) continue;
        if (!first) os << " + ";
        first = false;
        os << mpq_str(c_[j]);
        if (j == 1) os << "*z";
        if (j > 1) os << "*z^" << j;
    }
    if (first) os << "0/1";
    os << " (z = zeta_" << order_ << ")";
    return os.str();
}

std::string Cyclotomic::short_str() const {
    if (order_ == 1) return mpq_str(c_[0]);
    return str();
}

Cyclotomic cyc_arith(const Cyclotomic& a, const Cyclotomic& b, CycOp op) {
    switch (op) {
        case CycOp::add: return a + b;
        case CycOp::sub: return a - b;
        case CycOp::mul: return a * b;
        case CycOp::div: return a / b;
    }
    throw std::invalid_argument("cyc_arith: bad op");
}

}  // namespace vosa
