#include <doctest.h>

#include <functional>
#include <vector>

#include "vosa/superfock.hpp"

using namespace vosa;

namespace {

FockSpace one_fermion() {
    return FockSpace("a", {Generator{"a", Statistics::fermionic, Rat(1, 2), ZeroMode::none}}, {{Cyclotomic(1)}},
                     Rat(0), Rat(1, 2));
}

FockSpace two_fermions() {
    std::vector<Generator> g{{"a1", Statistics::fermionic, Rat(1, 2), ZeroMode::none},
                             {"a2", Statistics::fermionic, Rat(1, 2), ZeroMode::none}};
    return FockSpace("a", g, {{Cyclotomic(1), Cyclotomic(0)}, {Cyclotomic(0), Cyclotomic(1)}}, Rat(0), Rat(1));
}

// One Clifford zero mode e with <e,e> = 2 and integer levels.
FockSpace ramond_one() {
    return FockSpace("e", {Generator{"e", Statistics::fermionic, Rat(0), ZeroMode::clifford}}, {{Cyclotomic(2)}},
                     Rat(1, 16), Rat(1, 2));
}

FockSpace boson() {
    FockSpace s("h", {Generator{"h", Statistics::bosonic, Rat(0), ZeroMode::sector}}, {{Cyclotomic(1)}}, Rat(0), Rat(1));
    s.set_lattice({{1}}, {{Cyclotomic(1)}});
    return s;
}

// Number of partitions of 2n (in half units) into distinct odd parts, by brute force.
long distinct_odd_parts(long twice_n) {
    long count = 0;
    std::function<void(long, long)> rec = [&](long rest, long min_part) {
        if (rest == 0) {
            ++count;
            return;
        }
        for (long p = min_part; p <= rest; p += 2) rec(rest - p, p + 2);
    };
    rec(twice_n, 1);
    return count;
}

}  // namespace

TEST_CASE("fermionic contractions on the vacuum module") {
    auto s = one_fermion();
    auto v = s.state({{0, Rat(-1, 2)}});
    CHECK(s.apply(Mode{0, Rat(1, 2)}, v) == s.vacuum());
    CHECK(s.apply(Mode{0, Rat(-1, 2)}, v).is_zero());
    CHECK(s.apply(Mode{0, Rat(3, 2)}, v).is_zero());
    CHECK_THROWS_AS(s.apply(Mode{0, Rat(1)}, v), std::invalid_argument);
    CHECK_THROWS_AS(s.apply(Mode{0, Rat(0)}, v), std::invalid_argument);
}

TEST_CASE("canonical order and text form") {
    auto s = two_fermions();
    auto v = s.state({{1, Rat(-1, 2)}, {0, Rat(-3, 2)}});
    REQUIRE(v.size() == 1);
    CHECK(s.format(v.terms().begin()->first) == "a1(-3/2) a2(-1/2) |0>");
    CHECK(v.terms().begin()->second == Cyclotomic(-1));
    CHECK(s.weight(v.terms().begin()->first) == Rat(2));
}

TEST_CASE("basis enumeration matches distinct odd partitions") {
    auto s = one_fermion();
    auto b = s.basis_up_to(Rat(1, 2));
    REQUIRE(b.size() == 2);
    CHECK(b[0].word.empty());
    CHECK(b[1].word == std::vector<Mode>{{0, Rat(-1, 2)}});
    auto b2 = s.basis_up_to(Rat(2));
    CHECK(b2.size() == 4);
    for (long twice = 0; twice <= 24; ++twice) {
        CHECK(static_cast<long>(s.basis_at(Rat(twice, 2)).size()) == distinct_odd_parts(twice));
    }
}

TEST_CASE("super-commutativity of creation modes") {
    auto s = two_fermions();
    auto modes = s.creation_modes(Rat(5, 2));
    for (const auto& m : s.basis_up_to(Rat(5, 2))) {
        SuperVector w(m, Cyclotomic(1));
        for (const auto& a : modes) {
            for (const auto& b : modes) {
                if (a == b) continue;
                auto ab = s.apply(a, s.apply(b, w));
                auto ba = s.apply(b, s.apply(a, w));
                CHECK(ab == -ba);
            }
        }
    }
}

TEST_CASE("weight shift and parity flip") {
    auto s = two_fermions();
    std::vector<Mode> all;
    for (int g = 0; g < 2; ++g) {
        for (long t = -5; t <= 5; t += 2) all.push_back({g, Rat(t, 2)});
    }
    for (const auto& m : s.basis_up_to(Rat(3))) {
        SuperVector w(m, Cyclotomic(1));
        for (const auto& a : all) {
            auto out = s.apply(a, w);
            for (const auto& [mo, c] : out.terms()) {
                CHECK(s.weight(mo) == s.weight(m) - a.level);
                CHECK(s.parity(mo) != s.parity(m));
            }
        }
    }
}

TEST_CASE("anticommutator of annihilation and creation") {
    auto s = two_fermions();
    for (const auto& m : s.basis_up_to(Rat(3))) {
        SuperVector w(m, Cyclotomic(1));
        for (int g = 0; g < 2; ++g) {
            for (int h = 0; h < 2; ++h) {
                for (long p = 1; p <= 5; p += 2) {
                    for (long q = 1; q <= 5; q += 2) {
                        Mode a{g, Rat(p, 2)}, b{h, Rat(-q, 2)};
                        auto anti = s.apply(a, s.apply(b, w)) + s.apply(b, s.apply(a, w));
                        SuperVector expect = (g == h && p == q) ? w : SuperVector();
                        CHECK(anti == expect);
                    }
                }
            }
        }
    }
}

TEST_CASE("Clifford zero mode squares to half the form") {
    auto s = ramond_one();
    auto e0 = Mode{0, Rat(0)};
    auto v = s.apply(e0, s.vacuum());
    CHECK(s.apply(e0, v) == s.vacuum());
    CHECK(s.weight(s.vacuum_monomial()) == Rat(1, 16));
    // e(0) is its own partner: {e(0), e(0)} = 2.
    for (const auto& m : s.basis_up_to(Rat(3))) {
        SuperVector w(m, Cyclotomic(1));
        CHECK(s.apply(e0, s.apply(e0, w)) == w);
        for (long n = 1; n <= 3; ++n) {
            auto anti = s.apply(Mode{0, Rat(n)}, s.apply(Mode{0, Rat(-n)}, w)) +
                        s.apply(Mode{0, Rat(-n)}, s.apply(Mode{0, Rat(n)}, w));
            CHECK(anti == w * Cyclotomic(2));
        }
    }
    // Each weight space doubles through e(0).
    CHECK(s.basis_at(Rat(1, 16)).size() == 2);
}

TEST_CASE("bosonic modes and lattice sectors") {
    auto s = boson();
    auto e1 = s.vacuum({1});
    CHECK(s.weight(e1.terms().begin()->first) == Rat(1, 2));
    CHECK(s.apply(Mode{0, Rat(0)}, e1) == e1);
    CHECK(s.basis_at(Rat(1, 2)).size() == 2);
    auto v = s.state({{0, Rat(-1)}, {0, Rat(-1)}});
    // h(1) h(-1)^2 |0> = 2 h(-1) |0>
    CHECK(s.apply(Mode{0, Rat(1)}, v) == s.state({{0, Rat(-1)}}) * Cyclotomic(2));
    CHECK(s.apply(Mode{0, Rat(2)}, v).is_zero());
    CHECK(s.parity(e1.terms().begin()->first) == 1);
    // [h(m), h(n)] = m delta_{m+n,0}
    for (const auto& m : s.basis_up_to(Rat(3))) {
        SuperVector w(m, Cyclotomic(1));
        for (long a = -3; a <= 3; ++a) {
            for (long b = -3; b <= 3; ++b) {
                auto comm = s.apply(Mode{0, Rat(a)}, s.apply(Mode{0, Rat(b)}, w)) -
                            s.apply(Mode{0, Rat(b)}, s.apply(Mode{0, Rat(a)}, w));
                SuperVector expect = a + b == 0 ? w * Cyclotomic(a) : SuperVector();
                CHECK(comm == expect);
            }
        }
    }
}

TEST_CASE("graded dimensions add over direct sums") {
    auto s = two_fermions();
    auto a = one_fermion();
    // dim of two fermions = (dim of one fermion)^2 as series.
    auto d2 = s.graded_dimension(Rat(4));
    auto d1 = a.graded_dimension(Rat(5));
    CHECK(series_eq(d2, d1 * d1, Rat(4)));
    // Superdimension is the signed count.
    auto sd = a.graded_dimension(Rat(4), true);
    long total = 0;
    for (const auto& m : a.basis_up_to(Rat(4) + Rat(1, 48))) total += a.parity(m) ? -1 : 1;
    long series_total = 0;
    for (const auto& [e, c] : sd.terms()) series_total += c.rational().get_num().get_si();
    CHECK(total == series_total);
}
