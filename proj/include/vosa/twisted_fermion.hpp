#pragma once
// Twisted modules of V_fer^{(x)d}: the parity-twisted module M_sigma and the
// (1 2 ... k)-twisted module M_g for even k.  Both are Fock spaces whose
// generating twisted fields are fixed combinations of the module generators;
// vertex operators of composite states are built by the iterate formula.

#include <map>
#include <memory>
#include <mutex>
#include <tuple>
#include <vector>

#include "vosa/free_fermion.hpp"
#include "vosa/module.hpp"

namespace vosa {

// One eigencomponent of a twisted generating field.  For a generator a of V,
// Y(a(-1/2)|0>, x) = sum over components of x^{-shift} sum_p h(p + 1/2 + shift) x^{-p-1},
// p integral, shift in [0, 1).
struct FieldComponent {
    HVector h;
    Rat shift;
};

class IterateModule final : public VertexModule {
public:
    IterateModule(std::string name, SpacePtr algebra, SpacePtr space, std::vector<std::vector<FieldComponent>> fields);

    std::string name() const override { return name_; }
    const FockSpace& algebra() const override { return *algebra_; }
    const FockSpace& space() const override { return *space_; }
    SuperVector monomial_mode(const Monomial& v, Rat n, const SuperVector& w) const override;

    const SpacePtr& algebra_ptr() const { return algebra_; }
    const SpacePtr& space_ptr() const { return space_; }
    const std::vector<FieldComponent>& field(int generator) const { return fields_.at(static_cast<std::size_t>(generator)); }
    // Mode a(level) of the twisted field of generator a; only the
    // component with matching level class contributes.
    SuperVector field_mode(int generator, Rat level, const SuperVector& w) const;

private:
    SuperVector mode_on_monomial(const Monomial& v, Rat n, const Monomial& w) const;

    std::string name_;
    SpacePtr algebra_;
    SpacePtr space_;
    std::vector<std::vector<FieldComponent>> fields_;
    mutable std::mutex cache_mutex_;
    mutable std::map<std::tuple<Monomial, Rat, Monomial>, SuperVector> cache_;
};

using IteratePtr = std::shared_ptr<const IterateModule>;

// V_fer^{(x)d} as a module over itself through the iterate formula (cross-check
// of the normal-ordered products).
IteratePtr build_untwisted_iterate(int d);

// M_sigma: generators b+j, b-j (j <= d/2) with <b-, b+> = 1, levels in Z,
// b+(0) creating and b-(0) annihilating; for odd d a Clifford generator
// "eps" with <eps, eps> = 2.  Vacuum weight d/16.
IteratePtr build_parity_twisted(int d);

// M_g for g = (1 2 ... k), k even: generators e1..e(k-1) with levels in
// Z + r/k and <e_r, e_{k-r}> = 1/k, and "eps" = sqrt(2k) e_0 with
// <eps, eps> = 2.  Vacuum weight (k^2 + 2)/(48k).
IteratePtr build_perm_twisted(int k);

// M_(1 2) with the field of a^(2) negated, which twists by sigma o (1 2).
IteratePtr build_sigma_transposition_twisted();

// Closed forms of the twisted Virasoro modes.
SuperVector L_sigma(const IterateModule& m, std::int64_t mm, const SuperVector& w);
SuperVector L_g(const IterateModule& m, int k, std::int64_t mm, const SuperVector& w);

struct ParityUnstablePair {
    ModulePtr parent;
    std::shared_ptr<const SubModule> plus;
    std::shared_ptr<const SubModule> minus;
};

// Splits a module with a Clifford zero mode eps(0), eps(0)^2 = 1, into
// (1 +- E)W^0 + (1 -+ E)W^1.  Throws std::domain_error when there is no such
// zero mode (the module is parity stable).
ParityUnstablePair split_parity_unstable(const std::shared_ptr<const IterateModule>& m);

// E sigma_W: eps(0) composed with the parity of the part without eps(0).
SuperVector clifford_involution(const FockSpace& space, const SuperVector& v);

ModulePtr flip_module(ModulePtr m);

}  // namespace vosa
