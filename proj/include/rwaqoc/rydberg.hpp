#pragma once

#include <Eigen/Dense>
#include <array>
#include <optional>
#include <string>
#include <vector>

#include "rwaqoc/dynamics.hpp"
#include "rwaqoc/level_graph.hpp"

namespace rwaqoc {

// Two-atom basis {00, 01, 0r, 10, 11, 1r, r0, r1, rr}.
inline constexpr int kRydbergLevels = 9;
extern const std::array<const char*, kRydbergLevels> kRydbergLabels;
int rydberg_index(const std::string& label);

// Rotating-frame model of two individually addressed atoms with qubit states
// coupled to a Rydberg level by eight lasers; the doubly excited state is
// shifted by the blockade energy. Units: rad/us, durations in us.
struct RydbergScenario {
    std::array<cx, 8> rabi{};        // Omega_1..Omega_8
    std::array<double, 5> deltas{};  // delta_1..delta_5
    double blockade = 0.0;           // U
    std::array<bool, 8> active{};    // laser mask
    bool finite_blockade = false;    // reinstate the blockade-detuned cross drives

    // Bell-state protocol: Omega_1 = Omega_4 = 2pi*1 MHz, Omega_5 = 2pi*3.2,
    // Omega_8 = 2pi*1.3, delta_5 = -U, U = 2pi*20 MHz, lasers {1,4,5,8} on.
    static RydbergScenario bell_defaults();
};

inline constexpr double kBellDuration = 0.314;  // us (314 ns)

// Static rotating-frame Hamiltonian with the laser mask applied.
Eigen::MatrixXcd rydberg_hamiltonian(const RydbergScenario& scenario);

// Couplings each active laser induces on the transitions shifted by the
// blockade; these oscillate at +-U-scale frequencies and are what the ideal
// model drops.
std::vector<HarmonicTerm> rydberg_cross_terms(const RydbergScenario& scenario);

struct RydbergModel {
    LevelSystem levels;  // energies = diagonal, couplings = active laser drives
    LevelGraph graph;
    std::vector<std::vector<int>> components;  // all, singletons included
    int controllable_components = 0;           // components with >= 2 levels
    bool initial_linked_to_target = false;     // |00> and |11> share a component
};

RydbergModel build_rydberg(const RydbergScenario& scenario);

std::vector<std::vector<int>> graph_components(const LevelGraph& graph);

// |00>  ->  (|00> + |11>)/sqrt(2) under constant drives for the given
// duration; finite-blockade scenarios are integrated with the cross terms.
double rydberg_transfer_infidelity(const RydbergScenario& scenario, double duration,
                                   double tol = kDefaultExactTol);

struct RydbergReport {
    RydbergScenario scenario;
    double duration = kBellDuration;
    double infidelity = 1.0;
    std::optional<double> reoptimized_infidelity;
    std::array<cx, 8> reoptimized_rabi{};
    std::array<double, 5> reoptimized_deltas{};
    double reoptimized_duration = 0.0;
    long evaluations = 0;
    std::vector<std::vector<int>> components;
    int controllable_components = 0;
};

// Runs the Bell-transfer study; reoptimize refines the active magnitudes,
// phases and the duration with the simplex search on the ideal model.
RydbergReport rydberg_bell_transfer(const RydbergScenario& scenario,
                                    double duration = kBellDuration, bool reoptimize = false,
                                    double tol = kDefaultExactTol);

}  // namespace rwaqoc
