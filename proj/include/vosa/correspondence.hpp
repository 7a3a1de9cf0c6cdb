#pragma once
// The boson-fermion isomorphism phi: V_{Z alpha} -> V_fer (x) V_fer, the lattice
// automorphisms obtained by transporting (1 2) and sigma o (1 2) through phi, a
// constructive check that two twisted modules are isomorphic, and the evidence
// harness for the two correspondence conjectures.

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "vosa/free_fermion.hpp"
#include "vosa/lattice_vosa.hpp"
#include "vosa/linalg.hpp"
#include "vosa/module.hpp"

namespace vosa {

// A weight-preserving linear map fixed on basis monomials of the source and
// extended linearly.  Images are computed on first use and memoized; the
// inverse solves inside the image of one source weight space at a time.
class GradedLinearMap {
public:
    using Rule = std::function<SuperVector(const Monomial&)>;

    GradedLinearMap(SpacePtr source, SpacePtr target, Rat cutoff, Rule rule);
    GradedLinearMap(const GradedLinearMap&) = delete;
    GradedLinearMap& operator=(const GradedLinearMap&) = delete;

    const FockSpace& source() const { return *source_; }
    const FockSpace& target() const { return *target_; }
    const SpacePtr& source_ptr() const { return source_; }
    const SpacePtr& target_ptr() const { return target_; }
    Rat cutoff() const { return cutoff_; }

    SuperVector image(const Monomial& m) const;
    SuperVector operator()(const SuperVector& v) const;
    // nullopt when v is not in the image.
    std::optional<SuperVector> preimage(const SuperVector& v) const;
    // All basis monomials of weight <= cutoff with their images.
    std::map<Monomial, SuperVector> images() const;
    // Images of each source weight space up to the cutoff are independent.
    bool injective() const;

private:
    struct Fiber {
        SpanBasis span;
        std::vector<Monomial> sources;
        std::size_t source_dim = 0;
    };
    const Fiber& fiber(Rat w) const;

    SpacePtr source_;
    SpacePtr target_;
    Rat cutoff_;
    Rule rule_;
    mutable std::mutex mutex_;
    mutable std::map<Monomial, SuperVector> cache_;
    mutable std::map<Rat, Fiber> fibers_;
};

using LinearMapPtr = std::shared_ptr<const GradedLinearMap>;

// alpha^{+-} = (a1 -+ i a2) / sqrt 2 in V_fer (x) V_fer.
HVector alpha_plus();
HVector alpha_minus();

// V_{Z alpha} with <alpha, alpha> = 1 and its trivial cocycle.
LatticePtr build_boson_lattice();

// phi(alpha(-m_1)...alpha(-m_r) e^{n alpha}) = X_{-m_1}...X_{-m_r} s_n with
// X = alpha^+(-1/2) alpha^-(-1/2)|0> and s_n = alpha^+(-n+1/2)...alpha^+(-1/2)|0>
// (alpha^- and |n| for n < 0).  target must be two orthonormal fermions a1, a2.
LinearMapPtr build_phi(const LatticePtr& source, const SpacePtr& target, Rat cutoff);
LinearMapPtr build_phi(Rat cutoff);

// phi(u_n v) = phi(u)_n phi(v) for basis u, v of weight <= w_max, n in window.
CheckResult verify_phi_intertwines(const GradedLinearMap& phi, const LatticeAlgebra& lattice, Rat w_max,
                                   const ModeWindow& window);

enum class Transport { perm, sigma_perm };

// The lift of nu = -1 on Z alpha (k = 4, eta = i) matching phi^{-1} o g o phi:
// e^{n alpha} -> (-i)^n e^{-n alpha} for g = (1 2), i^n e^{-n alpha} for g = sigma o (1 2).
IsometryTwist transported_twist(const IntegralLattice& lattice, Transport which);
SuperVector transported_automorphism(const LatticeAlgebra& lattice, Transport which, const SuperVector& x);

// The fermionic automorphism g itself.
SuperVector fermion_automorphism(const FockSpace& vfer, Transport which, const SuperVector& x);

// Pointwise phi^{-1} o g o phi against the lattice lift on weight <= w_max,
// involutivity, sigma nu-hat = sigma_V nu-hat, fixed vacuum and omega, and the
// automorphism law g(u_n g^{-1} w) = (g u)_n w on the window.
CheckResult verify_transport(const GradedLinearMap& phi, const LatticeAlgebra& lattice, Rat w_max, const ModeWindow& window);

// Builds an isomorphism F: a -> b weight by weight, starting from the
// one-dimensional lowest weight spaces and following the modes of `generator`
// on a and of transport(generator) on b, then checks F(u_n w) = transport(u)_n F(w)
// for every algebra basis state u of weight <= probe_weight, every w up to
// lowest + w_max and n in window.  Throws std::invalid_argument when the
// graded dimensions differ up to lowest + w_max.
CheckResult module_correspondence_check(const VertexModule& a, const VertexModule& b,
                                        const std::function<SuperVector(const SuperVector&)>& transport,
                                        const SuperVector& generator, Rat w_max, Rat probe_weight,
                                        const ModeWindow& window);

struct EvidenceItem {
    std::string name;
    bool consistent = false;
    std::string detail;
};

struct EvidenceReport {
    int conjecture = 0;
    int k = 0;
    std::vector<EvidenceItem> items;
    bool consistent() const;
    std::string status() const { return consistent() ? "evidence-consistent" : "evidence-inconsistent"; }
};

// dim_q M_g against dim_{q^{1/k}} M_sigma (d = 1) and the halves of M_g, k in {2, 4}.
EvidenceReport conjecture1_evidence(int k, Rat trunc);

// k = 2: the transported (1 2) and sigma o (1 2) are lattice lifts and the
// lattice modules match the fermionic ones.  k = 4: the naive transport of
// (1 2 3 4) mixes lattice sectors.
EvidenceReport conjecture2_evidence(int k, Rat w_max = Rat(2), const ModeWindow& window = {Rat(-3), Rat(3), Rat(1, 2)});

// Elements of V_{Z alpha} (x) V_{Z alpha} as sums of c (x (x) y) over basis monomials.
using TensorState = std::map<std::pair<Monomial, Monomial>, Cyclotomic>;

// (phi (x) phi)^{-1} o (1 2 3 4) o (phi (x) phi) on a tensor of basis states.
TensorState four_cycle_transport(const GradedLinearMap& phi, const Monomial& x, const Monomial& y);
std::string format_tensor(const FockSpace& space, const TensorState& t);

}  // namespace vosa
