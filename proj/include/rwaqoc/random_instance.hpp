#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "rwaqoc/level_system.hpp"

namespace rwaqoc {

struct RandomInstanceSpec {
    int n = 2;
    std::uint64_t seed = 1;
    double energy_span = 0.0;  // 0 = n
    double min_gap = 0.1;      // separation between all transition frequencies
    double detuning = 0.0;     // common detuning applied to every drive
    long max_tries = 200000;

    void validate() const;
};

struct RandomInstance {
    LevelSystem system;                // sorted spectrum, unit tree couplings
    std::vector<double> frequencies;   // omega_f = E_kj - detuning, one per edge
    std::vector<int> field_edges;      // generating field -> edge map
    Eigen::VectorXcd goal;             // uniform on the unit sphere
};

// Labeled tree drawn uniformly via a Pruefer sequence; the spectrum is
// resampled until every transition frequency clears min_gap from zero and
// from every other transition. Throws ResampleExhausted when the gap
// constraint cannot be met.
RandomInstance random_instance(const RandomInstanceSpec& spec);

// Uniform labeled tree on n vertices as an edge list.
std::vector<std::pair<int, int>> random_tree(int n, std::uint64_t seed);

}  // namespace rwaqoc
