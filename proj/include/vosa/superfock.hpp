#pragma once
// Highest-weight modules over Heisenberg and Clifford superalgebras.
//
// A FockSpace is described by generators (fermionic or bosonic), a bilinear
// form on them, the admissible level class of each generator and the rule for
// its level-0 mode.  States are sparse combinations of canonical monomials:
// creation modes sorted by (generator, level), deepest level first, acting on
// the vacuum, optionally tagged with a lattice sector e^beta.

#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "vosa/cyclotomic.hpp"
#include "vosa/qseries.hpp"
#include "vosa/rational.hpp"

namespace vosa {

enum class Statistics { fermionic, bosonic };

// How the level-0 mode of a generator acts.
enum class ZeroMode {
    none,        // level 0 is not admissible
    create,      // stored in monomials like a creation operator
    annihilate,  // kills the vacuum
    clifford,    // stored at most once; its square is B(a,a)/2
    sector,      // bosonic: acts on e^beta by <h, beta>
};

struct Generator {
    std::string name;
    Statistics stats = Statistics::fermionic;
    Rat level_class = Rat(0);  // admissible levels are level_class + Z
    ZeroMode zero = ZeroMode::none;
};

struct Mode {
    int gen = 0;
    Rat level;
    friend auto operator<=>(const Mode&, const Mode&) = default;
};

struct Monomial {
    std::vector<Mode> word;            // canonical order
    std::vector<std::int64_t> sector;  // lattice coordinates; empty when there is no lattice
    int summand = 0;                   // copy index inside a direct sum
    friend auto operator<=>(const Monomial&, const Monomial&) = default;
};

class SuperVector {
public:
    SuperVector() = default;
    SuperVector(const Monomial& m, const Cyclotomic& c) { add(m, c); }

    void add(const Monomial& m, const Cyclotomic& c);
    void add(Monomial&& m, const Cyclotomic& c);
    const std::map<Monomial, Cyclotomic>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }
    Cyclotomic coeff(const Monomial& m) const;

    SuperVector& operator+=(const SuperVector& o);
    SuperVector& operator-=(const SuperVector& o);
    SuperVector& operator*=(const Cyclotomic& c);
    friend SuperVector operator+(SuperVector a, const SuperVector& b) { return a += b; }
    friend SuperVector operator-(SuperVector a, const SuperVector& b) { return a -= b; }
    friend SuperVector operator*(SuperVector a, const Cyclotomic& c) { return a *= c; }
    friend SuperVector operator*(const Cyclotomic& c, SuperVector a) { return a *= c; }
    SuperVector operator-() const { return *this * Cyclotomic(-1); }
    friend bool operator==(const SuperVector& a, const SuperVector& b) { return a.terms_ == b.terms_; }

private:
    std::map<Monomial, Cyclotomic> terms_;
};

// A vector of the underlying space h, as a combination of generators.
using HVector = std::map<int, Cyclotomic>;

enum class Parity { even, odd, mixed, zero };

class FockSpace {
public:
    FockSpace(std::string name, std::vector<Generator> gens, std::vector<std::vector<Cyclotomic>> form,
              Rat weight_offset, Rat central_charge);

    // Attach a lattice: sectors e^beta with beta in Z^rank and Gram matrix
    // gram.  pairing[g][i] = <generator g, i-th lattice basis vector>.
    void set_lattice(std::vector<std::vector<std::int64_t>> gram, std::vector<std::vector<Cyclotomic>> pairing);

    const std::string& name() const { return name_; }
    int num_generators() const { return static_cast<int>(gens_.size()); }
    const Generator& generator(int g) const { return gens_.at(static_cast<std::size_t>(g)); }
    int find_generator(const std::string& name) const;  // -1 if absent
    const Cyclotomic& form(int a, int b) const { return form_[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)]; }
    Cyclotomic form(const HVector& a, const HVector& b) const;
    Rat weight_offset() const { return offset_; }
    Rat central_charge() const { return central_charge_; }
    bool has_lattice() const { return !gram_.empty(); }
    std::size_t lattice_rank() const { return gram_.size(); }
    const std::vector<std::vector<std::int64_t>>& gram() const { return gram_; }
    std::int64_t lattice_form(const std::vector<std::int64_t>& a, const std::vector<std::int64_t>& b) const;
    Cyclotomic pairing(int gen, const std::vector<std::int64_t>& beta) const;

    bool admissible(int gen, Rat level) const;
    // Creation modes are stored in monomials; everything else acts by contraction.
    bool is_creation(const Mode& m) const;

    Monomial vacuum_monomial(std::vector<std::int64_t> sector = {}) const;
    SuperVector vacuum(std::vector<std::int64_t> sector = {}) const;
    // Canonical monomial built from an arbitrary list of creation modes (left to right).
    SuperVector state(const std::vector<Mode>& modes, std::vector<std::int64_t> sector = {}) const;

    // Mode action; throws std::invalid_argument on an inadmissible level.
    SuperVector apply(const Mode& m, const SuperVector& v) const;
    // Action of h(level) for h a combination of generators.  Components whose
    // level class does not match the level are skipped.
    SuperVector apply(const HVector& h, Rat level, const SuperVector& v) const;

    Rat weight(const Monomial& m) const;
    // Largest weight among the terms of v (offset when v is zero).
    Rat max_weight(const SuperVector& v) const;
    bool is_homogeneous(const SuperVector& v) const;
    int parity(const Monomial& m) const;
    Parity parity(const SuperVector& v) const;
    // sigma: (-1)^{|w|} termwise.
    SuperVector parity_map(const SuperVector& v) const;

    // All canonical monomials of weight <= w_max, sorted by (weight, monomial).
    std::vector<Monomial> basis_up_to(Rat w_max) const;
    std::vector<Monomial> basis_at(Rat w) const;
    // Creation modes that could appear in states of weight <= w_max.
    std::vector<Mode> creation_modes(Rat w_max) const;

    // q^{-c/24} sum_w dim(M_w) q^w, or the signed superdimension.
    PuiseuxSeries graded_dimension(Rat trunc, bool super = false) const;

    std::string format(const Mode& m) const;
    std::string format(const Monomial& m) const;
    std::string format(const SuperVector& v) const;

private:
    Cyclotomic bracket(const Mode& a, const Mode& b) const;
    void apply_to_monomial(const Mode& a, const Monomial& m, const Cyclotomic& c, SuperVector& out) const;
    std::vector<std::vector<std::int64_t>> sectors_up_to(Rat w_max) const;

    std::string name_;
    std::vector<Generator> gens_;
    std::vector<std::vector<Cyclotomic>> form_;
    Rat offset_;
    Rat central_charge_;
    std::vector<std::vector<std::int64_t>> gram_;
    std::vector<std::vector<Cyclotomic>> pairing_;
};

// Stable sort of `modes` by ascending level (normal order).  Returns the sign
// picked up by exchanging fermionic modes.
int normal_order_sign(const FockSpace& space, std::vector<Mode>& modes);

}  // namespace vosa
