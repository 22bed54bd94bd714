#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rwaqoc/nelder_mead.hpp"
#include "rwaqoc/random_instance.hpp"
#include "rwaqoc/transfer.hpp"

namespace rwaqoc {

struct SweepConfig {
    std::vector<int> dimensions{2, 3, 4, 5, 6};
    std::vector<double> detunings{1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7};
    int goals_per_cell = 50;
    double epsilon = 1e-3;
    std::uint64_t master_seed = 20240901;
    int threads = 0;  // 0 = library default
    double min_gap = 0.1;
    double amp_cross_fraction = 0.005;  // amplitude cap relative to the
                                        // smallest neglected-term frequency
    double delta_headroom = 50.0;       // cap never squeezes below this many
                                        // detunings, keeping goals reachable
    double double_check_tol = 1e-10;
    SimplexConfig simplex = transfer_simplex_defaults();

    void validate() const;
};

struct SweepRow {
    int n = 0;
    double delta = 0.0;
    std::uint64_t seed = 0;
    double distance = 0.0;  // || goal - initial ||
    double rwa_infidelity = 1.0;
    double exact_infidelity = 1.0;
    bool rwa_success = false;
    bool exact_success = false;
    double duration = 0.0;
    long evaluations = 0;
    std::string error;
};

struct LambdaCell {
    int n = 0;
    double delta = 0.0;
    int goals = 0;
    double lambda_rwa = 0.0;    // percent
    double lambda_exact = 0.0;  // percent
};

struct SweepResult {
    std::vector<SweepRow> rows;       // sorted by (n, delta, seed)
    std::vector<LambdaCell> lambdas;  // sorted by (n, delta)
    double wall_seconds = 0.0;
};

// Serial reference implementation.
SweepResult run_sweep_serial(const SweepConfig& config);

// OpenMP-parallel sweep over the cell list. Output is independent of thread
// count and execution order: per-cell seeds derive from the master seed and
// rows are canonically sorted before aggregation.
SweepResult run_sweep(const SweepConfig& config);

std::string sweep_csv(const SweepResult& result);
std::string lambda_summary_json(const SweepConfig& config, const SweepResult& result);

}  // namespace rwaqoc
