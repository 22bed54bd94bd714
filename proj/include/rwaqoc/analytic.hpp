#pragma once

#include <Eigen/Dense>
#include <vector>

#include "rwaqoc/types.hpp"

namespace rwaqoc {

// Bloch angles of the two-level goal (cos(theta/2), sin(theta/2) e^{i phi}).
struct TwoLevelGoal {
    double theta = 0.0;  // [0, pi]
    double phi = 0.0;    // [0, 2pi)
};

// Star goal (xi_0, xi_1 e^{i beta_1}, ...): nonnegative moduli, unit norm,
// global phase fixed by beta_0 = 0.
struct StarGoal {
    std::vector<double> xi;
    std::vector<double> beta;  // beta[0] ignored (== 0)

    static StarGoal from_state(const Eigen::VectorXcd& state);
    Eigen::VectorXcd state() const;
    void validate() const;
};

enum class SolveStatus {
    Reachable,
    Unreachable,
    InconsistentGoal,
};

struct ControlSolution {
    std::vector<double> amplitudes;  // |A_k|
    std::vector<double> phases;      // alpha_k in [0, 2pi)
    double duration = 0.0;
    SolveStatus status = SolveStatus::Reachable;
    bool reachable = false;
    double max_reachable_theta = 0.0;  // filled when unreachable
    double effective_rabi = 0.0;       // sqrt(Delta^2 + sum |A_k|^2)
};

// Closed-form coefficients for the driven two-level system starting from
// (1, 0): c_0 = e^{i Delta t/2}(cos(At/2) - i (Delta/A) sin(At/2)),
// c_1 = e^{-i Delta t/2} (A_drive/A) sin(At/2) with A = sqrt(Delta^2+|A|^2).
Eigen::Vector2cd two_level_evolve(cx drive, double delta, double t);

// Amplitude, duration and phase reaching a Bloch goal at fixed |A| and
// detuning; duration is the quantum-speed-limit time. Never throws on an
// unreachable goal: the returned solution carries the maximal reachable
// Bloch angle instead.
ControlSolution two_level_solve(const TwoLevelGoal& goal, double amplitude, double delta);

// Star system (center 0 coupled to every other level, equal detunings),
// starting from (1, 0, ..., 0).
Eigen::VectorXcd star_evolve(const std::vector<cx>& drives, double delta, double t);

// Solves the star transfer. Leg amplitudes are rescaled proportionally to
// the goal moduli while preserving the requested total drive strength
// sum |A_k|^2; legs handed in with zero amplitude stay off.
ControlSolution star_solve(const StarGoal& goal, const std::vector<double>& amplitudes,
                           double delta);

// Generator-space image of the closed forms: the effective generator whose
// rotating-frame propagator reproduces star_evolve / two_level_evolve. The
// closed-form drive A maps to the generator amplitude iA and the closed-form
// detuning to an edge detuning of opposite sign.
Eigen::MatrixXcd star_generator(const std::vector<cx>& drives, double delta);
cx generator_amplitude(cx closed_form_drive);

}  // namespace rwaqoc
