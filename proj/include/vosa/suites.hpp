#pragma once
// Named verification suites shared by the command-line tool and the
// acceptance runner.  Every check is exact; a suite returns one entry per
// identity with a short description of what was compared.

#include <string>
#include <vector>

#include "vosa/module.hpp"
#include "vosa/qseries.hpp"

namespace vosa {

class IterateModule;

struct SuiteConfig {
    int d = 1;
    int k = 2;
    Rat trunc = Rat(10);
    Rat w_max = Rat(2);
    int window = 3;
    std::int64_t bound = 4;
};

struct NamedCheck {
    std::string name;
    std::string reference;  // the identity being checked
    bool pass = false;
    std::string detail;
};

// A state of the algebra whose twisted modes live in coset + Z.
struct EigenState {
    SuperVector state;
    Rat coset;
};

// g-eigencombinations of the generators a_j(-1/2)|0>, read off the twisted
// field components of m.
std::vector<EigenState> eigen_generators(const IterateModule& m);

// [L(m), L(n)] = (m - n) L(m + n) + (m^3 - m)/12 c delta_{m+n,0} with
// L(m) = omega_{m+1}, on states up to w_max and |m|, |n| <= window.
CheckResult check_virasoro(const VertexModule& mod, const SuperVector& omega, Rat c, Rat w_max, int window);

// The (twisted) Jacobi identity in Borcherds form for every ordered pair of
// states, l integral and m, n in the cosets, all within +-window, on module
// states up to lowest + w_max.  alg acts on the algebra for the iterate (u_j v).
CheckResult check_jacobi(const VertexModule& mod, const VertexModule& alg, const std::vector<EigenState>& states, Rat w_max,
                         int window);

std::vector<std::string> suite_names();
// Throws std::invalid_argument for an unknown suite or parameters out of range.
std::vector<NamedCheck> run_suite(const std::string& suite, const SuiteConfig& cfg);

std::vector<std::string> character_targets();
struct CharacterResult {
    PuiseuxSeries series;
    NamedCheck verdict;
};
// Enumerated graded dimension and its closed form.  Throws std::invalid_argument
// for an unknown target or invalid parameters.
CharacterResult character(const std::string& target, const SuiteConfig& cfg);

}  // namespace vosa
