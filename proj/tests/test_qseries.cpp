#include <doctest.h>

#include <vector>

#include "vosa/qseries.hpp"

using vosa::Cyclotomic;
using vosa::PuiseuxSeries;
using vosa::Rat;

namespace {

// Independent integer oracle: coefficients of prod_{n>=1} (1 + s x^{n}) in
// powers of x^{1/step} with shift applied to every factor exponent.
// Exponents are in units of 1/step; factor n contributes x^{(n*step + shift)/step}.
std::vector<long> product_oracle(long sign, long shift, long step, long max_units) {
    std::vector<long> c(static_cast<std::size_t>(max_units) + 1, 0);
    c[0] = 1;
    for (long n = 1;; ++n) {
        long e = n * step + shift;
        if (e > max_units) break;
        for (long j = max_units; j >= e; --j) c[static_cast<std::size_t>(j)] += sign * c[static_cast<std::size_t>(j - e)];
    }
    return c;
}

// Euler's pentagonal theorem as a second, structurally different oracle.
std::vector<long> pentagonal(long max_n) {
    std::vector<long> c(static_cast<std::size_t>(max_n) + 1, 0);
    for (long k = -20; k <= 20; ++k) {
        long e = k * (3 * k - 1) / 2;
        if (e >= 0 && e <= max_n) c[static_cast<std::size_t>(e)] += (k % 2 == 0) ? 1 : -1;
    }
    return c;
}

PuiseuxSeries poly(std::initializer_list<std::pair<Rat, long>> terms, Rat t) {
    PuiseuxSeries s(t);
    for (auto [e, c] : terms) s.add_term(e, Cyclotomic(c));
    return s;
}

}  // namespace

TEST_CASE("basic arithmetic") {
    auto a = poly({{0, 1}, {1, 1}}, Rat(10));
    auto b = poly({{0, 1}, {1, -1}}, Rat(10));
    CHECK(vosa::series_eq(a * b, poly({{0, 1}, {2, -1}}, Rat(10)), Rat(10)));
    CHECK(vosa::series_eq(a + PuiseuxSeries(Rat(10)), a, Rat(10)));
    auto h = poly({{Rat(1, 2), 1}}, Rat(10));
    auto hh = vosa::series_arith(h, h, vosa::SeriesOp::mul);
    CHECK(hh.terms().size() == 1);
    CHECK(hh.coeff(Rat(1)) == Cyclotomic(1));
}

TEST_CASE("negative leading exponents shrink the product range") {
    auto a = poly({{-1, 1}}, Rat(3));
    auto b = poly({{0, 1}, {3, 1}}, Rat(3));
    CHECK((a * b).trunc() == Rat(2));
}

TEST_CASE("truncation rules") {
    auto a = poly({{0, 1}, {3, 1}}, Rat(5));
    auto b = poly({{0, 1}, {1, 1}}, Rat(4));
    auto p = a * b;
    CHECK(p.trunc() == Rat(4));
    CHECK(p.coeff(Rat(4)) == Cyclotomic(1));
    auto s = a + b;
    CHECK(s.trunc() == Rat(4));
    CHECK(s.coeff(Rat(0)) == Cyclotomic(2));
    // zero coefficients are never stored
    auto z = a - a;
    CHECK(z.is_zero());
    CHECK_THROWS(vosa::series_eq(a, b, Rat(5)));
}

TEST_CASE("exponent lattice bookkeeping") {
    auto f = poly({{Rat(-1, 48), 1}, {Rat(23, 48), 1}}, Rat(5));
    CHECK(f.denom() == 2);
    CHECK(f.offset() == Rat(23, 48));  // -1/48 reduced into [0, 1/2)
    for (const auto& [e, c] : f.terms()) CHECK(((e - f.offset()) * Rat(f.denom())).is_integer());
}

TEST_CASE("eta against the pentagonal number theorem") {
    auto eta = vosa::eta_series(Rat(12));
    auto pent = pentagonal(11);
    CHECK(eta.leading_exponent() == Rat(1, 24));
    CHECK(eta.coeff(Rat(1, 24)) == Cyclotomic(1));
    CHECK(eta.coeff(Rat(1, 24) + Rat(1)) == Cyclotomic(-1));
    CHECK(eta.coeff(Rat(1, 24) + Rat(2)) == Cyclotomic(-1));
    for (long n = 0; n <= 11; ++n) CHECK(eta.coeff(Rat(1, 24) + Rat(n)) == Cyclotomic(pent[static_cast<std::size_t>(n)]));
}

TEST_CASE("weber functions against product oracles") {
    auto f = vosa::weber(vosa::Weber::f, Rat(6));
    auto f1 = vosa::weber(vosa::Weber::f1, Rat(6));
    auto f2 = vosa::weber(vosa::Weber::f2, Rat(6));
    // f, f1: factors q^{n - 1/2}, i.e. units of 1/2: 2n - 1
    auto po = product_oracle(1, -1, 2, 12);
    auto mo = product_oracle(-1, -1, 2, 12);
    for (long u = 0; u <= 12; ++u) {
        Rat e = Rat(-1, 48) + Rat(u, 2);
        if (e > Rat(6)) break;
        CHECK(f.coeff(e) == Cyclotomic(po[static_cast<std::size_t>(u)]));
        CHECK(f1.coeff(e) == Cyclotomic(mo[static_cast<std::size_t>(u)]));
    }
    CHECK(f.coeff(Rat(-1, 48) + Rat(1, 2)) == Cyclotomic(1));
    CHECK(f1.coeff(Rat(-1, 48) + Rat(1, 2)) == Cyclotomic(-1));
    auto p2 = product_oracle(1, 0, 1, 5);
    CHECK(f2.leading_exponent() == Rat(1, 24));
    CHECK(f2.coeff(Rat(1, 24)) == Cyclotomic::sqrt2());
    for (long n = 0; n <= 5; ++n) {
        CHECK(f2.coeff(Rat(1, 24) + Rat(n)) == Cyclotomic::sqrt2() * Cyclotomic(p2[static_cast<std::size_t>(n)]));
    }
}

TEST_CASE("substitutions") {
    auto q2 = poly({{2, 1}}, Rat(10));
    auto r = vosa::substitute_root(q2, 2);
    CHECK(r.coeff(Rat(1)) == Cyclotomic(1));
    CHECK(r.trunc() == Rat(5));
    auto f2 = vosa::weber(vosa::Weber::f2, Rat(5));
    CHECK(vosa::series_eq(vosa::substitute_root(f2, 1), f2, Rat(5)));
    CHECK(vosa::substitute_root(vosa::eta_series(Rat(4)), 2).leading_exponent() == Rat(1, 48));
    auto eta = vosa::eta_series(Rat(12));
    auto ab = vosa::substitute_root(vosa::substitute_root(eta, 2), 3);
    auto direct = vosa::substitute_root(eta, 6);
    CHECK(vosa::series_eq(ab, direct, Rat(2)));
    CHECK(vosa::series_eq(vosa::substitute_power(vosa::substitute_root(eta, 2), 2), eta, Rat(12)));
}

TEST_CASE("inverse") {
    auto eta = vosa::eta_series(Rat(10));
    auto inv = eta.inverse();
    CHECK(inv.leading_exponent() == Rat(-1, 24));
    CHECK(inv.trunc() == Rat(10) - Rat(2, 24));
    auto one = eta * inv;
    CHECK(vosa::series_eq(one, PuiseuxSeries::constant(Cyclotomic(1), Rat(9)), Rat(9)));
    // 1/prod(1-q^n) generates partitions: 1,1,2,3,5,7,11,15,22,30
    long parts[] = {1, 1, 2, 3, 5, 7, 11, 15, 22, 30};
    for (long n = 0; n < 10; ++n) CHECK(inv.coeff(Rat(-1, 24) + Rat(n)) == Cyclotomic(parts[n]));
    // cyclotomic leading coefficient
    auto g = poly({{1, 0}}, Rat(8));
    g.add_term(Rat(1, 3), Cyclotomic(1) + Cyclotomic::i());
    g.add_term(Rat(2), Cyclotomic::root(8, 1));
    auto gi = g.inverse();
    CHECK(vosa::series_eq(g * gi, PuiseuxSeries::constant(Cyclotomic(1), gi.trunc()), gi.trunc()));
}

TEST_CASE("weber and eta identities at T=8") {
    const Rat T(8);
    const Rat W(17);
    auto eta = vosa::eta_series(W);
    auto eta2 = vosa::substitute_power(vosa::eta_series(W), 2);
    auto etah = vosa::substitute_root(vosa::eta_series(W), 2);
    CHECK(vosa::series_eq(vosa::weber(vosa::Weber::f, T), (eta * eta) / (eta2 * etah), T));
    CHECK(vosa::series_eq(vosa::weber(vosa::Weber::f1, T), etah / eta, T));
    CHECK(vosa::series_eq(vosa::weber(vosa::Weber::f2, T), Cyclotomic::sqrt2() * eta2 / eta, T));
    auto prod = vosa::weber(vosa::Weber::f, Rat(6)) * vosa::weber(vosa::Weber::f1, Rat(6)) *
                vosa::weber(vosa::Weber::f2, Rat(6));
    CHECK(prod.trunc() == Rat(6) - Rat(1, 24));
    auto prod8 = vosa::weber(vosa::Weber::f, Rat(7)) * vosa::weber(vosa::Weber::f1, Rat(7)) *
                 vosa::weber(vosa::Weber::f2, Rat(7));
    CHECK(vosa::series_eq(prod8, PuiseuxSeries::constant(Cyclotomic::sqrt2(), Rat(6)), Rat(6)));
}

TEST_CASE("text and json") {
    auto s = poly({{Rat(1, 2), 2}, {Rat(0), 1}}, Rat(3));
    CHECK(s.text() == "0/1 : 1/1 (z = zeta_1)\n1/2 : 2/1 (z = zeta_1)\n");
    auto j = s.to_json();
    CHECK(j.size() == 2);
    CHECK(j[1]["exp"] == "1/2");
    CHECK(j[1]["coeff"][0] == "2/1");
}
