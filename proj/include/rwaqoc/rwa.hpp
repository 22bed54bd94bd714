#pragma once

#include <Eigen/Dense>
#include <vector>

#include "rwaqoc/level_graph.hpp"
#include "rwaqoc/level_system.hpp"

namespace rwaqoc {

struct DriveField {
    cx amplitude{0.0, 0.0};
    double omega = 0.0;  // > 0
};

// F drive fields with their field -> edge resonance assignment. Each field
// drives exactly one edge and each driven edge has exactly one field.
struct DriveSet {
    std::vector<DriveField> fields;
    std::vector<int> edge_of_field;  // index into LevelGraph::edges

    int count() const { return static_cast<int>(fields.size()); }
    // Signed detuning E_up - E_lo - omega_f of field f on its edge.
    double detuning(const LevelGraph& graph, int f) const {
        return graph.edges[edge_of_field[f]].frequency - fields[f].omega;
    }
    // Per-edge signed detunings (0 on undriven edges).
    std::vector<double> edge_detunings(const LevelGraph& graph) const;
};

// Matches each frequency to the unique edge within |E_kj - omega| < window.
// window <= 0 selects the default 0.1 * (smallest transition-frequency gap).
// Throws NoResonantTransition / AmbiguousResonance / DuplicateDrive.
std::vector<int> assign_fields(const LevelSystem& system, const LevelGraph& graph,
                               const std::vector<double>& frequencies, double window = 0.0);

DriveSet make_drive_set(const LevelSystem& system, const LevelGraph& graph,
                        const std::vector<DriveField>& fields, double window = 0.0);

// Rotating-frame coupling matrix: entry (up, lo) of a driven edge is
// A_f/2 * (H_C)_{up,lo}, the mirror entry its conjugate, zero elsewhere.
// Undriven coupled edges are an error unless allow_undriven (sparse-drive
// mode, lasers switched off).
Eigen::MatrixXcd build_rwa_matrix(const LevelGraph& graph, const DriveSet& drives,
                                  bool allow_undriven = false);

// Hermitian time-independent generator of the rotating-frame dynamics.
struct EffectiveGenerator {
    Eigen::MatrixXcd matrix;  // rwa matrix - diag(gamma)
    GammaAssignment gamma;    // acts on b-frame coefficients
};

inline constexpr double kHermiticityTol = 1e-14;

EffectiveGenerator build_effective_generator(const Eigen::MatrixXcd& rwa_matrix,
                                             const GammaAssignment& gamma);

struct FieldValidity {
    int field = 0;
    double detuning_ratio = 0.0;   // |Delta| / omega
    double amplitude_ratio = 0.0;  // |A| / omega
};

struct RwaValidityReport {
    std::vector<FieldValidity> fields;
    double worst_detuning_ratio = 0.0;
    double worst_amplitude_ratio = 0.0;
    double bound = 0.0;
    bool pass = false;
};

// Low-intensity / near-resonance check: pass iff every ratio is below bound.
RwaValidityReport check_drive_validity(const LevelSystem& system, const LevelGraph& graph,
                                       const DriveSet& drives, double bound = 1e-2);

}  // namespace rwaqoc
