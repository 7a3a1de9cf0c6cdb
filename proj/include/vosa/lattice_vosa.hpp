#pragma once
// Integral lattices, their central extensions by <eta0>, the lattice vertex
// operator superalgebra V_L and nu-hat-twisted V_L-modules S[nu] (x) U_T.
//
// Lattice vectors are integer coordinate vectors in a fixed basis alpha_1..alpha_r.
// Central elements are stored as exponents of eta0; sections e: L -> L-hat are
// fixed by a bimultiplicative cocycle, e_a e_b = eps(a, b) e_{a+b}.

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "vosa/module.hpp"

namespace vosa {

using IntVec = std::vector<std::int64_t>;
using IntMat = std::vector<IntVec>;

class IntegralLattice {
public:
    // Throws std::invalid_argument unless gram is symmetric positive definite.
    explicit IntegralLattice(IntMat gram);

    std::size_t rank() const { return gram_.size(); }
    const IntMat& gram() const { return gram_; }
    std::int64_t form(const IntVec& a, const IntVec& b) const;
    std::int64_t norm(const IntVec& a) const { return form(a, a); }
    int parity(const IntVec& a) const { return static_cast<int>(norm(a) & 1); }
    IntVec basis_vector(std::size_t i) const;
    // All vectors with |coordinate| <= bound.
    std::vector<IntVec> box(std::int64_t bound) const;

private:
    IntMat gram_;
};

// An isometry nu of period k with a chosen primitive k-th root eta = zeta_k^eta_exp,
// together with a lift nu-hat e_a = u(a) e_{nu a}.  u is the homomorphism
// L -> <eta0> with the given basis values (default: trivial), times the
// quadratic correction needed when nu does not preserve the cocycle.
class IsometryTwist {
public:
    IsometryTwist(const IntegralLattice& lattice, IntMat nu, int k, int eta_exp = 1, std::vector<std::int64_t> lift_exps = {});

    static IsometryTwist identity(const IntegralLattice& lattice, int k = 1);

    int k() const { return k_; }
    const IntMat& matrix() const { return nu_; }
    IntVec apply(const IntVec& a, int power = 1) const;
    Cyclotomic eta() const;
    int eta_exponent() const { return eta_exp_; }
    // eta^e for e in (1/2)Z, reading eta^{1/2} as zeta_{2k}^{eta_exp}.
    Cyclotomic eta_pow(Rat e) const;
    // eta0 = (-1)^k eta has order q = k (k even) or 2k (k odd).
    int q() const { return k_ % 2 == 0 ? k_ : 2 * k_; }
    Cyclotomic eta0_pow(std::int64_t e) const;
    // Exponent of eta0 representing (-1)^sign_exp eta^eta_power.
    std::int64_t eta0_exponent(std::int64_t sign_exp, std::int64_t eta_power) const;
    // u(a) as an exponent of eta0.
    std::int64_t lift_exponent(const IntVec& a) const;
    const std::vector<std::int64_t>& lift_exponents() const { return lift_; }

private:
    IntMat nu_;
    int k_;
    int eta_exp_;
    std::vector<std::int64_t> lift_;
};

struct Commutators {
    Cyclotomic c0;
    Cyclotomic c;
};

// C0(a,b) = (-1)^{<a,a><b,b> + <a,b>},
// C(a,b) = (-1)^{<a,a><b,b>} prod_j (-eta^j)^{<nu^j a, b>}.
Commutators commutator_maps(const IntegralLattice& lattice, const IsometryTwist& twist, const IntVec& a, const IntVec& b);
// The same values as exponents of eta0.
std::int64_t commutator_exponent(const IntegralLattice& lattice, const IsometryTwist& twist, const IntVec& a, const IntVec& b,
                                 bool twisted);

struct LiftOrderEntry {
    IntVec alpha;
    std::int64_t half_period_pairing = 0;  // <nu^{k/2} alpha, alpha>
    bool pairing_condition = false;        // half_period_pairing in 2Z + |alpha|
    bool sum_condition = false;            // sum_j <nu^j alpha, alpha> in |alpha| + 2Z
    bool weighted_sum_condition = false;   // sum_j j <nu^j alpha, alpha> in kZ
};

struct LiftOrderReport {
    std::vector<LiftOrderEntry> entries;
    bool must_double = false;
};

// Requires k even (std::invalid_argument otherwise).
LiftOrderReport lift_order_check(const IntegralLattice& lattice, const IsometryTwist& twist);

enum class Extension { untwisted, twisted };

// Bimultiplicative cocycle with values in <eta0>, stored on basis pairs.
class Cocycle {
public:
    Cocycle() = default;
    // eta0 is the generator the exponents refer to, of order q.
    Cocycle(std::vector<std::vector<std::int64_t>> exps, int q, Cyclotomic eta0)
        : exps_(std::move(exps)), q_(q), eta0_(std::move(eta0)) {}
    std::int64_t exponent(const IntVec& a, const IntVec& b) const;
    Cyclotomic value(const IntVec& a, const IntVec& b) const { return eta0_.pow(exponent(a, b)); }
    bool is_trivial() const;
    int q() const { return q_; }
    const std::vector<std::vector<std::int64_t>>& basis_exponents() const { return exps_; }

private:
    std::vector<std::vector<std::int64_t>> exps_;
    int q_ = 1;
    Cyclotomic eta0_ = Cyclotomic(1);
};

// eps(a,b)/eps(b,a) = C0 (untwisted) or C (twisted).  Trivial when the
// commutator map is identically 1; otherwise eps(e_i, e_j) = C(e_i, e_j) for
// i < j and 1 elsewhere.  Throws std::domain_error when C(e_i, e_i) != 1.
Cocycle cocycle_section(const IntegralLattice& lattice, const IsometryTwist& twist, Extension which);

// prod_{0<j<k/2} (-eta^j)^{<nu^{-j} a, b>}, relating the two products.
Cyclotomic extension_identification_factor(const IntegralLattice& lattice, const IsometryTwist& twist, const IntVec& a,
                                           const IntVec& b);

// eta0^phase e_vec.
struct ExtElement {
    std::int64_t phase = 0;
    IntVec vec;
    friend bool operator==(const ExtElement&, const ExtElement&) = default;
};

class CentralExtension {
public:
    CentralExtension(IntegralLattice lattice, IsometryTwist twist, Extension which);
    ExtElement section(const IntVec& a) const { return {0, a}; }
    ExtElement multiply(const ExtElement& x, const ExtElement& y) const;
    ExtElement inverse(const ExtElement& x) const;
    // nu-hat(eta0^s e_a) = eta0^s u(a) e_{nu a}.
    ExtElement lift(const ExtElement& x) const;
    Cyclotomic scalar(std::int64_t phase) const { return twist_.eta0_pow(phase); }
    const Cocycle& cocycle() const { return cocycle_; }
    const IntegralLattice& lattice() const { return lattice_; }
    const IsometryTwist& twist() const { return twist_; }

private:
    std::int64_t reduce(std::int64_t e) const;
    IntegralLattice lattice_;
    IsometryTwist twist_;
    Cocycle cocycle_;
};

// tau(a nu-hat a^{-1}) = eta^{k<a,a>/2 - sum_j <nu^j a, a>/2}.
Cyclotomic tau_character(const IntegralLattice& lattice, const IsometryTwist& twist, const IntVec& a);

// Brute force over the coordinate box: well-definedness on M-hat,
// multiplicativity under the twisted product, and image in <eta> when the
// lift-order condition holds.
CheckResult verify_tau_homomorphism(const IntegralLattice& lattice, const IsometryTwist& twist, std::int64_t bound);

// Sublattices N = {a : <a, h_(0)> = 0}, M = (1 - nu)L and R = center of N
// under C, each as a basis of integer vectors (possibly empty).
struct TwistSublattices {
    IntMat n_basis;
    IntMat m_basis;
    IntMat r_basis;
    std::int64_t index_r_over_m = 1;
    std::int64_t index_n_over_r = 1;
};
TwistSublattices twist_sublattices(const IntegralLattice& lattice, const IsometryTwist& twist, std::int64_t box = 8);

// A homomorphism chi: R-hat -> C^x with chi(eta0) = eta0, given by its values
// on r_basis.
struct ChiCharacter {
    IntMat r_basis;
    std::vector<Cyclotomic> values;
    // chi(e_a) for a in R; throws std::invalid_argument when a is not in R.
    Cyclotomic operator()(const IntVec& a) const;
};

// The |R/M| extensions of tau, found by brute force over roots of unity of
// order 2k|R/M| on a basis of R.  Requires the twisted cocycle to be trivial
// on R (std::domain_error otherwise).
std::vector<ChiCharacter> enumerate_chi(const IntegralLattice& lattice, const IsometryTwist& twist, std::int64_t box = 8);

// Bivariate series coefficients c_{mnr}, m + n <= depth, r = 0..k-1.
class DeltaConstants {
public:
    DeltaConstants(int k, Cyclotomic eta, int depth);
    int k() const { return k_; }
    int depth() const { return depth_; }
    // Zero outside the computed range.
    const Cyclotomic& operator()(int m, int n, int r) const;

private:
    int k_;
    int depth_;
    std::vector<std::vector<std::vector<Cyclotomic>>> c_;  // [r][m][n]
    Cyclotomic zero_;
};
DeltaConstants delta_constants(int k, const Cyclotomic& eta, int depth);

// rho(a) = 2^{<nu^{k/2} a, a>/2} prod_{0<j<k/2} (1 - eta^{-j})^{<nu^j a, a>} (k even),
// without the power of 2 for k odd.
Cyclotomic rho_factor(const IntegralLattice& lattice, const IsometryTwist& twist, const IntVec& a);

// rho(a) / |rho(a)|.
Cyclotomic rho_phase(const IntegralLattice& lattice, const IsometryTwist& twist, const IntVec& a);

// Vacuum weight (1/4k^2) sum_j j (k - j) dim h_(j).
Rat twisted_vacuum_weight(const IntegralLattice& lattice, const IsometryTwist& twist);

class LatticeAlgebra;
class TwistedLatticeModule;
using LatticePtr = std::shared_ptr<const LatticeAlgebra>;
using TwistedLatticePtr = std::shared_ptr<const TwistedLatticeModule>;

// Heisenberg modes alpha_i(n) (bosonic, "a1".."ar") and group-algebra sectors
// e^beta.  Vertex operators are the normal-ordered exponentials, with
// Y(e^beta, x) = E^-(-beta, x) E^+(-beta, x) e_beta x^beta.
class LatticeAlgebra final : public VertexModule {
public:
    LatticeAlgebra(IntegralLattice lattice, Cocycle cocycle);
    std::string name() const override { return "V_L"; }
    const FockSpace& algebra() const override { return *space_; }
    const FockSpace& space() const override { return *space_; }
    SuperVector monomial_mode(const Monomial& v, Rat n, const SuperVector& w) const override;

    const IntegralLattice& lattice() const { return lattice_; }
    const Cocycle& cocycle() const { return cocycle_; }
    const std::shared_ptr<const FockSpace>& space_ptr() const { return space_; }
    SuperVector conformal_vector() const;
    // e_beta acting on 1 (x) e^gamma.
    SuperVector group_action(const IntVec& beta, const SuperVector& w) const;

private:
    IntegralLattice lattice_;
    Cocycle cocycle_;
    std::shared_ptr<const FockSpace> space_;
};

// Untwisted V_L with the cocycle of the untwisted extension for nu = 1.
LatticePtr build_VL(const IntegralLattice& lattice);
LatticePtr build_VL(const IntegralLattice& lattice, const Cocycle& cocycle);

// nu-hat acting on V_L: nu on Heisenberg modes, e^beta -> u(beta) e^{nu beta}.
SuperVector lift_action(const LatticeAlgebra& v, const IsometryTwist& twist, const SuperVector& x);

// S[nu] (x) C_chi for h_(0) = 0 and N = R; the space has one bosonic generator per
// basis vector of each eigenspace h_(j), levels in j/k + Z.
class TwistedLatticeModule final : public VertexModule {
public:
    TwistedLatticeModule(LatticePtr algebra, IsometryTwist twist, ChiCharacter chi, std::string name);
    std::string name() const override { return name_; }
    const FockSpace& algebra() const override { return algebra_->space(); }
    const FockSpace& space() const override { return *space_; }
    SuperVector monomial_mode(const Monomial& v, Rat n, const SuperVector& w) const override;

    const LatticePtr& lattice_algebra() const { return algebra_; }
    const IsometryTwist& twist() const { return twist_; }
    const ChiCharacter& chi() const { return chi_; }
    // Component of lattice basis vector i in h_(j), in terms of space generators.
    const HVector& projection(std::size_t i, int j) const { return proj_[i][static_cast<std::size_t>(j)]; }
    // e^{Delta_x} v = sum_d x^{-d} v_d.
    std::map<std::int64_t, SuperVector> delta_expansion(const SuperVector& v) const;
    // The mode of W(v, x) before the Delta_x correction.
    SuperVector plain_mode(const Monomial& v, Rat n, const SuperVector& w) const;
    // g(a) relating the section of V_L to the trivial-cocycle section of the
    // twisted extension: g(a) g(b) / g(a+b) = eps_0(a, b) / F(a, b), with
    // g(e_i) the inverse phase of rho(e_i).  e_a acts on U_T as chi(e_a) g(a).
    Cyclotomic section_factor(const IntVec& a) const;

private:
    void ensure_constants(int depth) const;

    LatticePtr algebra_;
    IsometryTwist twist_;
    ChiCharacter chi_;
    std::string name_;
    std::shared_ptr<const FockSpace> space_;
    std::vector<std::vector<HVector>> proj_;  // [basis index][class j]
    std::vector<Cyclotomic> section_diag_;
    std::vector<std::vector<Cyclotomic>> section_off_;
    mutable std::mutex constants_mutex_;
    mutable std::optional<DeltaConstants> constants_;
};

TwistedLatticePtr build_twisted_lattice_module(LatticePtr algebra, const IsometryTwist& twist, const ChiCharacter& chi,
                                               std::string name = "V_L^T");

}  // namespace vosa
