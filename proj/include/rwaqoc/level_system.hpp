#pragma once

#include <vector>

#include "rwaqoc/types.hpp"

namespace rwaqoc {

// Off-diagonal coupling entry of the control operator. The stored value is
// the matrix element for (row k, col j); the mirror element is its conjugate.
struct Coupling {
    int k = 0;
    int j = 0;
    cx value{1.0, 0.0};
};

// Drift spectrum plus the Hermitian zero-diagonal coupling pattern (hbar = 1).
struct LevelSystem {
    std::vector<double> energies;
    std::vector<Coupling> couplings;

    int size() const { return static_cast<int>(energies.size()); }

    // Transition frequency E_k - E_j.
    double transition(int k, int j) const { return energies[k] - energies[j]; }

    // Throws Error unless N >= 2, energies finite, indices in range,
    // no self-loops and no duplicate coupling pairs.
    void validate() const;
};

enum class DegeneracyScope {
    CoupledOnly,  // compare only transitions that carry a coupling
    AllPairs,     // strict mode: every level pair
};

struct TransitionPair {
    int k = 0;
    int j = 0;  // transition (k, j), k above j in index order
};

struct DegeneracyViolation {
    TransitionPair a;
    TransitionPair b;
    double gap = 0.0;  // |E_a - E_b|
};

struct DegeneracyReport {
    std::vector<DegeneracyViolation> violations;
    double gap_tol = 0.0;
    bool valid() const { return violations.empty(); }
};

inline constexpr double kDefaultGapTol = 1e-6;

// Lists transition pairs closer than gap_tol. Empty list <=> non-degenerate.
DegeneracyReport check_nondegenerate(const LevelSystem& system,
                                     double gap_tol = kDefaultGapTol,
                                     DegeneracyScope scope = DegeneracyScope::CoupledOnly);

}  // namespace rwaqoc
