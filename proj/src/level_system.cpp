#include "rwaqoc/level_system.hpp"

#include <cmath>
#include <set>
#include <string>

namespace rwaqoc {

void LevelSystem::validate() const {
    const int n = size();
    if (n < 2) throw Error("LevelSystem: need at least 2 levels, got " + std::to_string(n));
    for (double e : energies) {
        if (!std::isfinite(e)) throw Error("LevelSystem: non-finite energy");
    }
    std::set<std::pair<int, int>> seen;
    for (const Coupling& c : couplings) {
        if (c.k < 0 || c.k >= n || c.j < 0 || c.j >= n)
            throw Error("LevelSystem: coupling index out of range");
        if (c.k == c.j) throw Error("LevelSystem: self-loop on level " + std::to_string(c.k));
        auto key = std::minmax(c.k, c.j);
        if (!seen.insert(key).second)
            throw Error("LevelSystem: duplicate coupling (" + std::to_string(c.k) + "," +
                        std::to_string(c.j) + ")");
    }
}

DegeneracyReport check_nondegenerate(const LevelSystem& system, double gap_tol,
                                     DegeneracyScope scope) {
    DegeneracyReport report;
    report.gap_tol = gap_tol;

    std::vector<TransitionPair> transitions;
    if (scope == DegeneracyScope::CoupledOnly) {
        for (const Coupling& c : system.couplings) {
            int hi = c.k, lo = c.j;
            if (system.energies[hi] < system.energies[lo]) std::swap(hi, lo);
            transitions.push_back({hi, lo});
        }
    } else {
        const int n = system.size();
        for (int j = 0; j < n; ++j)
            for (int k = j + 1; k < n; ++k) {
                int hi = k, lo = j;
                if (system.energies[hi] < system.energies[lo]) std::swap(hi, lo);
                transitions.push_back({hi, lo});
            }
    }

    for (std::size_t a = 0; a < transitions.size(); ++a) {
        const double fa = std::abs(system.transition(transitions[a].k, transitions[a].j));
        for (std::size_t b = a + 1; b < transitions.size(); ++b) {
            const double fb = std::abs(system.transition(transitions[b].k, transitions[b].j));
            const double gap = std::abs(fa - fb);
            if (gap <= gap_tol) report.violations.push_back({transitions[a], transitions[b], gap});
        }
    }
    return report;
}

}  // namespace rwaqoc
