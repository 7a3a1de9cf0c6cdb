#include "vosa/module.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace vosa {

std::vector<SuperVector> VertexModule::weight_basis(Rat w) const {
    std::vector<SuperVector> out;
    for (const auto& m : space().basis_at(w)) out.emplace_back(m, Cyclotomic(1));
    return out;
}

std::vector<Rat> VertexModule::weights_up_to(Rat w_max) const {
    std::set<Rat> ws;
    for (const auto& m : space().basis_up_to(w_max)) ws.insert(space().weight(m));
    return {ws.begin(), ws.end()};
}

std::vector<SuperVector> VertexModule::basis_up_to(Rat w_max) const {
    std::vector<SuperVector> out;
    for (Rat w : weights_up_to(w_max)) {
        for (auto& v : weight_basis(w)) out.push_back(std::move(v));
    }
    return out;
}

SuperVector VertexModule::mode(const SuperVector& v, Rat n, const SuperVector& w) const {
    SuperVector out;
    if (w.is_zero()) return out;
    for (const auto& [m, c] : v.terms()) out += monomial_mode(m, n, w) * c;
    return out;
}

PuiseuxSeries VertexModule::graded_dimension(Rat trunc) const {
    const Rat shift = space().central_charge() / Rat(24);
    PuiseuxSeries s(trunc);
    for (Rat w : weights_up_to(trunc + shift)) {
        s.add_term(w - shift, Cyclotomic(static_cast<long>(weight_basis(w).size())));
    }
    return s;
}

std::vector<SuperVector> SubModule::weight_basis(Rat w) const {
    SpanBasis span;
    for (const auto& v : parent_->weight_basis(w)) span.insert(projector_(v));
    return span.vectors();
}

SuperVector FlipModule::monomial_mode(const Monomial& v, Rat n, const SuperVector& w) const {
    SuperVector r = base_->monomial_mode(v, n, w);
    return algebra().parity(v) ? -r : r;
}

DirectSumModule::DirectSumModule(std::vector<ModulePtr> parts) : parts_(std::move(parts)) {
    if (parts_.empty()) throw std::invalid_argument("DirectSumModule: no summands");
    for (const auto& p : parts_) {
        if (&p->space() != &parts_.front()->space()) {
            throw std::invalid_argument("DirectSumModule: summands must share one space");
        }
    }
}

std::string DirectSumModule::name() const {
    std::string s;
    for (const auto& p : parts_) s += (s.empty() ? "" : " + ") + p->name();
    return s;
}

SuperVector DirectSumModule::component(const SuperVector& w, int summand) {
    SuperVector out;
    for (const auto& [m, c] : w.terms()) {
        if (m.summand != summand) continue;
        Monomial r = m;
        r.summand = 0;
        out.add(std::move(r), c);
    }
    return out;
}

SuperVector DirectSumModule::tagged(const SuperVector& w, int summand) {
    SuperVector out;
    for (const auto& [m, c] : w.terms()) {
        Monomial r = m;
        r.summand = summand;
        out.add(std::move(r), c);
    }
    return out;
}

SuperVector DirectSumModule::monomial_mode(const Monomial& v, Rat n, const SuperVector& w) const {
    SuperVector out;
    for (std::size_t i = 0; i < parts_.size(); ++i) {
        SuperVector part = component(w, static_cast<int>(i));
        if (part.is_zero()) continue;
        out += tagged(parts_[i]->monomial_mode(v, n, part), static_cast<int>(i));
    }
    return out;
}

std::vector<SuperVector> DirectSumModule::weight_basis(Rat w) const {
    std::vector<SuperVector> out;
    for (std::size_t i = 0; i < parts_.size(); ++i) {
        for (const auto& v : parts_[i]->weight_basis(w)) out.push_back(tagged(v, static_cast<int>(i)));
    }
    return out;
}

std::vector<Rat> DirectSumModule::weights_up_to(Rat w_max) const {
    std::set<Rat> ws;
    for (const auto& p : parts_) {
        for (Rat w : p->weights_up_to(w_max)) ws.insert(w);
    }
    return {ws.begin(), ws.end()};
}

std::vector<Rat> ModeWindow::values() const {
    std::vector<Rat> out;
    if (step <= Rat(0)) throw std::invalid_argument("ModeWindow: step must be positive");
    for (Rat n = lo; n <= hi; n += step) out.push_back(n);
    return out;
}

CheckResult check_parity_stable(const VertexModule& m, const std::function<SuperVector(const SuperVector&)>& p,
                                const std::vector<SuperVector>& algebra_states, Rat w_max, const ModeWindow& window) {
    CheckResult r;
    const auto basis = m.basis_up_to(w_max);
    for (const auto& w : basis) {
        ++r.checked;
        if (!(p(p(w)) == w)) r.fail("P^2 != 1 on " + m.space().format(w));
    }
    for (const auto& v : algebra_states) {
        const Parity pv = m.algebra().parity(v);
        if (pv == Parity::mixed) throw std::invalid_argument("check_parity_stable: v must have a parity");
        const Cyclotomic sign(pv == Parity::odd ? -1L : 1L);
        for (Rat n : window.values()) {
            for (const auto& w : basis) {
                ++r.checked;
                SuperVector lhs = p(m.mode(v, n, w));
                SuperVector rhs = m.mode(v, n, p(w)) * sign;
                if (!(lhs == rhs)) {
                    r.fail("v=" + m.algebra().format(v) + " n=" + n.str() + " w=" + m.space().format(w));
                }
            }
        }
    }
    return r;
}

}  // namespace vosa
