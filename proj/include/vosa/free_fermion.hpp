#pragma once
// The free fermion vertex operator superalgebra V_fer^{(x)d}: generators
// a1..ad with <aj, al> = delta_jl on half-integer levels, vertex operators by
// normal-ordered products of the generating fields.

#include <memory>
#include <vector>

#include "vosa/module.hpp"
#include "vosa/superfock.hpp"

namespace vosa {

using SpacePtr = std::shared_ptr<const FockSpace>;

// Orthonormal generators "a1".."ad".
SpacePtr build_Vfer(int d);
// Two fermions in the null basis "a+", "a-" with <a+, a-> = 1.
SpacePtr build_Vfer_polarized();

// omega = (1/2) sum over a dual pair of bases of h(-3/2) h^(-1/2) |0>.
SuperVector conformal_vector(const FockSpace& v);

// v_n w for V acting on itself, v a monomial of v_space.
SuperVector untwisted_mode(const FockSpace& v_space, const Monomial& v, Rat n, const SuperVector& w);
SuperVector untwisted_mode(const FockSpace& v_space, const SuperVector& v, Rat n, const SuperVector& w);

// V as a module over itself.
class FermionAlgebra final : public VertexModule {
public:
    explicit FermionAlgebra(SpacePtr v) : v_(std::move(v)) {}
    std::string name() const override { return v_->name(); }
    const FockSpace& algebra() const override { return *v_; }
    const FockSpace& space() const override { return *v_; }
    SuperVector monomial_mode(const Monomial& v, Rat n, const SuperVector& w) const override {
        return untwisted_mode(*v_, v, n, w);
    }
    const SpacePtr& space_ptr() const { return v_; }

private:
    SpacePtr v_;
};

// L(m) = omega_{m+1} on any module of a fermion algebra.
SuperVector virasoro_mode(const VertexModule& m, Rat mm, const SuperVector& w);

// A permutation of tensor factors: generator j goes to image[j].
struct SignedPermutation {
    std::vector<int> image;
    // (1 2 ... k): a^{(j)} -> a^{(j-1)}, a^{(1)} -> a^{(k)}.
    static SignedPermutation cycle(int k);
    static SignedPermutation transposition(int k, int a, int b);
    SignedPermutation then(const SignedPermutation& g) const;  // g after *this
};

// The algebra automorphism induced by h -> images[h]; Koszul signs come
// from reordering the images into canonical form.
SuperVector map_generators(const FockSpace& v_space, const std::vector<HVector>& images, const SuperVector& v);
SuperVector signed_permutation_action(const FockSpace& v_space, const SignedPermutation& g, const SuperVector& v);

SuperVector parity_map(const FockSpace& space, const SuperVector& v);

}  // namespace vosa
