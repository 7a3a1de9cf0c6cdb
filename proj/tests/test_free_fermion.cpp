#include <doctest.h>

#include "vosa/free_fermion.hpp"
#include "vosa/twisted_fermion.hpp"

using namespace vosa;

namespace {

PuiseuxSeries weber_power(Weber w, int d, Rat t) {
    PuiseuxSeries f = weber(w, t + Rat(1));
    PuiseuxSeries r = PuiseuxSeries::constant(Cyclotomic(1), t + Rat(1));
    for (int i = 0; i < d; ++i) r = r * f;
    return r;
}

SuperVector bracket(const VertexModule& m, Rat a, Rat b, const SuperVector& w) {
    return virasoro_mode(m, a, virasoro_mode(m, b, w)) - virasoro_mode(m, b, virasoro_mode(m, a, w));
}

}  // namespace

TEST_CASE("build_Vfer basics") {
    auto v1 = build_Vfer(1);
    CHECK(v1->basis_at(Rat(1, 2)).size() == 1);
    auto v2 = build_Vfer(2);
    CHECK(v2->basis_at(Rat(1)).size() == 1);
    CHECK(v2->central_charge() == Rat(1));
    CHECK(build_Vfer(3)->central_charge() == Rat(3, 2));
    CHECK_THROWS(build_Vfer(0));
}

TEST_CASE("characters of V_fer are powers of Weber functions") {
    for (int d = 1; d <= 3; ++d) {
        auto v = build_Vfer(d);
        CHECK(series_eq(v->graded_dimension(Rat(6)), weber_power(Weber::f, d, Rat(6)), Rat(6)));
        CHECK(series_eq(v->graded_dimension(Rat(6), true), weber_power(Weber::f1, d, Rat(6)), Rat(6)));
    }
}

TEST_CASE("vacuum, generating field and creation") {
    auto v = build_Vfer(2);
    FermionAlgebra alg(v);
    const auto vac = v->vacuum_monomial();
    for (const auto& m : v->basis_up_to(Rat(2))) {
        SuperVector w(m, Cyclotomic(1));
        CHECK(alg.monomial_mode(vac, Rat(-1), w) == w);
        CHECK(alg.monomial_mode(vac, Rat(0), w).is_zero());
        CHECK(alg.monomial_mode(vac, Rat(-2), w).is_zero());
    }
    // Y(a(-1/2)|0>, x) = sum a(n) x^{-n-1/2}: v_n = a(n + 1/2).
    auto a = v->state({{0, Rat(-1, 2)}});
    for (const auto& m : v->basis_up_to(Rat(2))) {
        SuperVector w(m, Cyclotomic(1));
        for (long n = -3; n <= 3; ++n) {
            CHECK(alg.mode(a, Rat(n), w) == v->apply(Mode{0, Rat(n) + Rat(1, 2)}, w));
        }
    }
    // lim_{x->0} Y(v,x)|0> = v, i.e. v_{-1}|0> = v and v_n|0> = 0 for n >= 0.
    for (const auto& m : v->basis_up_to(Rat(3))) {
        SuperVector u(m, Cyclotomic(1));
        CHECK(alg.mode(u, Rat(-1), v->vacuum()) == u);
        for (long n = 0; n <= 3; ++n) CHECK(alg.mode(u, Rat(n), v->vacuum()).is_zero());
    }
}

TEST_CASE("Virasoro modes on V_fer") {
    auto v = build_Vfer(1);
    FermionAlgebra alg(v);
    CHECK(virasoro_mode(alg, Rat(0), v->vacuum()).is_zero());
    auto a = v->state({{0, Rat(-1, 2)}});
    CHECK(virasoro_mode(alg, Rat(0), a) == a * Cyclotomic(mpq_class(1, 2)));
    for (int d = 1; d <= 2; ++d) {
        auto vd = build_Vfer(d);
        FermionAlgebra ad(vd);
        auto lhs = bracket(ad, Rat(2), Rat(-2), vd->vacuum()) - virasoro_mode(ad, Rat(0), vd->vacuum()) * Cyclotomic(4);
        CHECK(lhs == vd->vacuum() * Cyclotomic(mpq_class(d, 4)));
    }
}

TEST_CASE("Virasoro bracket on V_fer, d <= 2") {
    for (int d = 1; d <= 2; ++d) {
        auto v = build_Vfer(d);
        FermionAlgebra alg(v);
        const Rat c(d, 2);
        for (const auto& mono : v->basis_up_to(Rat(3))) {
            SuperVector w(mono, Cyclotomic(1));
            for (long m = -3; m <= 3; ++m) {
                for (long n = -3; n <= 3; ++n) {
                    SuperVector rhs = virasoro_mode(alg, Rat(m + n), w) * Cyclotomic(m - n);
                    if (m + n == 0) rhs += w * Cyclotomic(Rat(m * m * m - m, 12) * c);
                    CHECK(bracket(alg, Rat(m), Rat(n), w) == rhs);
                }
            }
        }
    }
}

TEST_CASE("L(0) measures weight and L(-1) acts as a derivative") {
    auto v = build_Vfer(2);
    FermionAlgebra alg(v);
    auto omega = conformal_vector(*v);
    for (const auto& mono : v->basis_up_to(Rat(3))) {
        SuperVector w(mono, Cyclotomic(1));
        CHECK(virasoro_mode(alg, Rat(0), w) == w * Cyclotomic(v->weight(mono)));
    }
    // (L(-1) u)_n = -n u_{n-1}
    for (const auto& um : v->basis_up_to(Rat(2))) {
        SuperVector u(um, Cyclotomic(1));
        SuperVector lu = virasoro_mode(alg, Rat(-1), u);
        for (const auto& mono : v->basis_up_to(Rat(2))) {
            SuperVector w(mono, Cyclotomic(1));
            for (long n = -3; n <= 3; ++n) {
                CHECK(alg.mode(lu, Rat(n), w) == alg.mode(u, Rat(n - 1), w) * Cyclotomic(-n));
            }
        }
    }
    CHECK(v->weight(omega.terms().begin()->first) == Rat(2));
}

TEST_CASE("weight bookkeeping of modes") {
    auto v = build_Vfer(2);
    FermionAlgebra alg(v);
    for (const auto& um : v->basis_up_to(Rat(2))) {
        for (const auto& wm : v->basis_up_to(Rat(2))) {
            for (long n = -3; n <= 3; ++n) {
                auto out = alg.monomial_mode(um, Rat(n), SuperVector(wm, Cyclotomic(1)));
                for (const auto& [m, c] : out.terms()) {
                    CHECK(v->weight(m) == v->weight(um) + v->weight(wm) - Rat(n) - Rat(1));
                }
            }
        }
    }
}

TEST_CASE("Jacobi identity for generating fields") {
    // Coefficient of x0^{-l-1} x1^{-m-1} x2^{-n-1}:
    // sum_i (-1)^i C(l,i) [u_{l+m-i} v_{n+i} + (-1)^{l+1} (-1)^{|u||v|} v_{l+n-i} u_{m+i}]
    //   = sum_i C(m,i) (u_{l+i} v)_{m+n-i}
    auto v = build_Vfer(2);
    FermionAlgebra alg(v);
    auto a1 = v->state({{0, Rat(-1, 2)}});
    auto a2 = v->state({{1, Rat(-1, 2)}});
    for (const auto& [u, w2] : {std::pair{a1, a1}, std::pair{a1, a2}}) {
        for (const auto& mono : v->basis_up_to(Rat(2))) {
            SuperVector w(mono, Cyclotomic(1));
            for (long l = -2; l <= 2; ++l) {
                for (long m = -2; m <= 2; ++m) {
                    for (long n = -2; n <= 2; ++n) {
                        SuperVector lhs, rhs;
                        for (long i = 0; i <= 8; ++i) {
                            Cyclotomic c(binom(Rat(l), i));
                            if (c.is_zero()) continue;
                            Cyclotomic s((i % 2 == 0) ? 1L : -1L);
                            lhs += alg.mode(u, Rat(l + m - i), alg.mode(w2, Rat(n + i), w)) * (s * c);
                            // (-1)^{l+1} * (-1)^{1*1}
                            Cyclotomic s2(((l + 1 + 1) % 2 == 0) ? 1L : -1L);
                            lhs += alg.mode(w2, Rat(l + n - i), alg.mode(u, Rat(m + i), w)) * (s * c * s2);
                        }
                        for (long i = 0; i <= 8; ++i) {
                            Cyclotomic c(binom(Rat(m), i));
                            if (c.is_zero()) continue;
                            rhs += alg.mode(alg.mode(u, Rat(l + i), w2), Rat(m + n - i), w) * c;
                        }
                        CHECK(lhs == rhs);
                    }
                }
            }
        }
    }
}

TEST_CASE("iterate formula agrees with normal-ordered products") {
    auto it = build_untwisted_iterate(2);
    FermionAlgebra alg(it->algebra_ptr());
    const auto& v = it->algebra();
    for (const auto& um : v.basis_up_to(Rat(2))) {
        for (const auto& wm : v.basis_up_to(Rat(2))) {
            SuperVector w(wm, Cyclotomic(1));
            for (long n = -3; n <= 3; ++n) {
                CHECK(it->monomial_mode(um, Rat(n), w) == alg.monomial_mode(um, Rat(n), w));
            }
        }
    }
}

TEST_CASE("signed permutations") {
    auto v = build_Vfer(2);
    auto g = SignedPermutation::transposition(2, 0, 1);
    CHECK(signed_permutation_action(*v, g, v->state({{0, Rat(-1, 2)}})) == v->state({{1, Rat(-1, 2)}}));
    auto both = v->state({{0, Rat(-1, 2)}, {1, Rat(-1, 2)}});
    CHECK(signed_permutation_action(*v, g, both) == -both);

    for (int k = 2; k <= 4; ++k) {
        auto vk = build_Vfer(k);
        auto c = SignedPermutation::cycle(k);
        for (const auto& m : vk->basis_up_to(Rat(3))) {
            SuperVector x(m, Cyclotomic(1));
            SuperVector y = x;
            for (int i = 0; i < k; ++i) y = signed_permutation_action(*vk, c, y);
            CHECK(y == x);
        }
    }
    // Automorphism law g Y(v,x) g^{-1} = Y(gv,x) and g omega = omega.
    auto v3 = build_Vfer(3);
    FermionAlgebra alg(v3);
    auto c = SignedPermutation::cycle(3);
    auto cinv = c.then(c);
    CHECK(signed_permutation_action(*v3, c, conformal_vector(*v3)) == conformal_vector(*v3));
    for (const auto& um : v3->basis_up_to(Rat(3, 2))) {
        SuperVector u(um, Cyclotomic(1));
        SuperVector gu = signed_permutation_action(*v3, c, u);
        for (const auto& wm : v3->basis_up_to(Rat(3, 2))) {
            SuperVector w(wm, Cyclotomic(1));
            for (long n = -2; n <= 2; ++n) {
                SuperVector lhs = signed_permutation_action(*v3, c, alg.mode(u, Rat(n), signed_permutation_action(*v3, cinv, w)));
                CHECK(lhs == alg.mode(gu, Rat(n), w));
            }
        }
    }
}

TEST_CASE("parity map") {
    auto v = build_Vfer(1);
    auto a = v->state({{0, Rat(-1, 2)}});
    CHECK(parity_map(*v, v->vacuum()) == v->vacuum());
    CHECK(parity_map(*v, a) == -a);
    for (const auto& m : v->basis_up_to(Rat(4))) {
        SuperVector x(m, Cyclotomic(1));
        CHECK(parity_map(*v, parity_map(*v, x)) == x);
    }
}
