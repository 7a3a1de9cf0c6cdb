#pragma once
// Modules for a vertex operator superalgebra V, viewed through their mode
// actions v_n w, Y(v, x) = sum_n v_n x^{-n-1}.  States of V live in algebra(),
// states of the module in space().

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "vosa/linalg.hpp"
#include "vosa/superfock.hpp"

namespace vosa {

class VertexModule {
public:
    virtual ~VertexModule() = default;
    virtual std::string name() const = 0;
    virtual const FockSpace& algebra() const = 0;
    virtual const FockSpace& space() const = 0;
    // v_n w for a single basis monomial v of algebra().
    virtual SuperVector monomial_mode(const Monomial& v, Rat n, const SuperVector& w) const = 0;
    // A basis of the weight-w part of the module (monomials of space() unless overridden).
    virtual std::vector<SuperVector> weight_basis(Rat w) const;
    // Weights of the module up to w_max, ascending.
    virtual std::vector<Rat> weights_up_to(Rat w_max) const;
    // Ordered basis of all weights up to w_max.
    std::vector<SuperVector> basis_up_to(Rat w_max) const;

    SuperVector mode(const SuperVector& v, Rat n, const SuperVector& w) const;
    PuiseuxSeries graded_dimension(Rat trunc) const;
};

using ModulePtr = std::shared_ptr<const VertexModule>;

// Invariant subspace of a module cut out by an idempotent on its space.
class SubModule final : public VertexModule {
public:
    using Projector = std::function<SuperVector(const SuperVector&)>;
    SubModule(ModulePtr parent, Projector projector, std::string name)
        : parent_(std::move(parent)), projector_(std::move(projector)), name_(std::move(name)) {}
    std::string name() const override { return name_; }
    const FockSpace& algebra() const override { return parent_->algebra(); }
    const FockSpace& space() const override { return parent_->space(); }
    SuperVector monomial_mode(const Monomial& v, Rat n, const SuperVector& w) const override {
        return parent_->monomial_mode(v, n, w);
    }
    std::vector<SuperVector> weight_basis(Rat w) const override;
    std::vector<Rat> weights_up_to(Rat w_max) const override { return parent_->weights_up_to(w_max); }
    SuperVector project(const SuperVector& v) const { return projector_(v); }
    const ModulePtr& parent() const { return parent_; }

private:
    ModulePtr parent_;
    Projector projector_;
    std::string name_;
};

// (M, Y_M o sigma_V): odd vectors act with the opposite sign.
class FlipModule final : public VertexModule {
public:
    explicit FlipModule(ModulePtr base) : base_(std::move(base)) {}
    std::string name() const override { return "flip(" + base_->name() + ")"; }
    const FockSpace& algebra() const override { return base_->algebra(); }
    const FockSpace& space() const override { return base_->space(); }
    SuperVector monomial_mode(const Monomial& v, Rat n, const SuperVector& w) const override;
    std::vector<SuperVector> weight_basis(Rat w) const override { return base_->weight_basis(w); }
    std::vector<Rat> weights_up_to(Rat w_max) const override { return base_->weights_up_to(w_max); }

private:
    ModulePtr base_;
};

// A direct sum of modules over the same space; states carry Monomial::summand.
class DirectSumModule final : public VertexModule {
public:
    DirectSumModule(std::vector<ModulePtr> parts);
    std::string name() const override;
    const FockSpace& algebra() const override { return parts_.front()->algebra(); }
    const FockSpace& space() const override { return parts_.front()->space(); }
    SuperVector monomial_mode(const Monomial& v, Rat n, const SuperVector& w) const override;
    std::vector<SuperVector> weight_basis(Rat w) const override;
    std::vector<Rat> weights_up_to(Rat w_max) const override;
    // Restriction to one summand, and the inclusion back.
    static SuperVector component(const SuperVector& w, int summand);
    static SuperVector tagged(const SuperVector& w, int summand);

private:
    std::vector<ModulePtr> parts_;
};

// A mode query range: all n in lo + step*Z with lo <= n <= hi.
struct ModeWindow {
    Rat lo;
    Rat hi;
    Rat step = Rat(1);
    std::vector<Rat> values() const;
};

struct CheckResult {
    bool pass = true;
    std::size_t checked = 0;
    std::vector<std::string> witnesses;  // first few failures
    void fail(std::string what) {
        pass = false;
        if (witnesses.size() < 8) witnesses.push_back(std::move(what));
    }
};

// P^2 = 1 and P v_n = (-1)^{|v|} v_n P on states up to w_max, for v in
// algebra_states and n in window.
CheckResult check_parity_stable(const VertexModule& m, const std::function<SuperVector(const SuperVector&)>& p,
                                const std::vector<SuperVector>& algebra_states, Rat w_max, const ModeWindow& window);

}  // namespace vosa
