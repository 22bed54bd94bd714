#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <vector>

#include "rwaqoc/dynamics.hpp"
#include "rwaqoc/nelder_mead.hpp"
#include "rwaqoc/rwa.hpp"

namespace rwaqoc {

// State-to-state transfer task on a tree-coupled system with fixed drive
// frequencies. Initial and goal states are interaction-frame coefficient
// targets; the free parameters are the field magnitudes, phases and the
// duration.
struct TransferProblem {
    LevelSystem system;
    std::vector<double> frequencies;  // omega_f, one per field
    std::vector<int> field_edges;     // field -> edge; empty = auto-assign
    double delta = 0.0;               // common detuning (bookkeeping)
    Eigen::VectorXcd initial;
    Eigen::VectorXcd goal;
    double epsilon = 1e-3;      // success threshold on the infidelity
    double amplitude_cap = 0.0;  // 0 = derived from the validity bounds
    double duration_cap = 0.0;   // 0 = derived from the amplitude cap
    std::uint64_t seed = 1;
};

// One field per tree edge at omega_f = E_kj - delta, ground initial state.
TransferProblem make_transfer_problem(LevelSystem system, double delta, Eigen::VectorXcd goal,
                                      std::uint64_t seed = 1);

struct TransferSolution {
    std::vector<double> amplitudes;
    std::vector<double> phases;
    double duration = 0.0;
    double rwa_infidelity = 1.0;
    std::optional<double> exact_infidelity;
    bool rwa_success = false;
    bool exact_success = false;
    long evaluations = 0;
    std::uint64_t seed = 0;
    IntegratorStats exact_stats;
};

// Nelder-Mead defaults used for transfer problems: 20 random/seeded starts
// sharing the evaluation budget, two incumbent re-seeds each.
SimplexConfig transfer_simplex_defaults();

// Smallest oscillation frequency among the terms the rotating-frame model
// neglects (counter-rotating and cross-field couplings). The micromotion
// left out scales like |A| over this frequency.
double min_neglected_frequency(const LevelGraph& graph, const std::vector<double>& frequencies,
                               const std::vector<int>& field_edges);

// Infidelity of the rotating-frame evolution against the goal for explicit
// control parameters. Deterministic; used as the optimization objective.
double rwa_transfer_infidelity(const TransferProblem& problem,
                               const std::vector<double>& amplitudes,
                               const std::vector<double>& phases, double duration);

TransferSolution optimize_transfer(const TransferProblem& problem,
                                   const SimplexConfig& config = transfer_simplex_defaults());

// Drive set realizing a solution (for exact propagation and serialization).
DriveSet solution_drives(const TransferProblem& problem, const TransferSolution& solution);

// Re-simulates the solution under the full time-dependent Hamiltonian and
// records the exact-model infidelity. A positive double check requires the
// rotating-frame optimization to have succeeded in the first place.
void double_check(const TransferProblem& problem, TransferSolution& solution,
                  double tol = kDefaultExactTol);

}  // namespace rwaqoc
