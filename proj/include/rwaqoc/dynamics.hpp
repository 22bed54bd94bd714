#pragma once

#include <Eigen/Dense>
#include <atomic>
#include <functional>
#include <vector>

#include "rwaqoc/rwa.hpp"

namespace rwaqoc {

enum class Frame {
    Lab,          // psi_k
    Interaction,  // c_k = e^{+i E_k t} psi_k
    Rotating,     // b_k = e^{+i gamma_k t} c_k
};

struct StateVector {
    Eigen::VectorXcd amplitudes;
    Frame frame = Frame::Lab;
    double time = 0.0;

    double norm() const { return amplitudes.norm(); }
    StateVector at_time(double t) const {
        StateVector s = *this;
        s.time = t;
        return s;
    }
};

StateVector make_state(Eigen::VectorXcd amplitudes, Frame frame = Frame::Lab, double time = 0.0);
StateVector basis_state(int n, int index, Frame frame = Frame::Lab, double time = 0.0);

// Diagonal-phase change of frame at the state's own time stamp. gamma is
// required only when the rotating frame is involved.
StateVector frame_transform(const StateVector& state, Frame target, const LevelSystem& system,
                            const GammaAssignment* gamma = nullptr);

// I = 1 - |<goal|reached>|^2, global-phase invariant. Both states must carry
// the same frame and time stamp.
double infidelity(const StateVector& goal, const StateVector& reached);
double infidelity(const Eigen::VectorXcd& goal, const Eigen::VectorXcd& reached);

// Euclidean distance || |goal> - |start> ||; deliberately not phase invariant.
double hilbert_distance(const StateVector& goal, const StateVector& start);
double hilbert_distance(const Eigen::VectorXcd& goal, const Eigen::VectorXcd& start);

// b(T) = exp(-i G T) b(0) by Hermitian eigendecomposition; exact up to
// machine precision, no step error.
StateVector propagate_effective(const EffectiveGenerator& generator, const StateVector& b0,
                                double duration);

struct IntegratorStats {
    long steps = 0;
    long rejected = 0;
    long rhs_evaluations = 0;
    double max_local_error = 0.0;
};

struct PropagationResult {
    StateVector state;
    double duration = 0.0;
    IntegratorStats stats;
    double norm_drift = 0.0;  // | ||psi(T)|| - ||psi(0)|| |, left unrenormalized
};

inline constexpr double kDefaultExactTol = 1e-12;

using TrajectoryObserver = std::function<void(double, const Eigen::VectorXcd&)>;

// Exact propagation of the full time-dependent Hamiltonian
//   i d/dt psi = [H_D + sum_f Re(A_f e^{-i omega_f t}) H_C] psi,
// integrated in the interaction picture with adaptive step-size control
// (local error <= tol per step). psi0 must be a lab-frame state at t = 0.
PropagationResult propagate_exact(const LevelSystem& system, const LevelGraph& graph,
                                  const DriveSet& drives, const StateVector& psi0,
                                  double duration, double tol = kDefaultExactTol,
                                  const TrajectoryObserver& observer = nullptr,
                                  const std::atomic<bool>* stop = nullptr);

// H(t) += amp e^{i freq t} |row><col| + h.c.; rows/cols strictly off-diagonal.
struct HarmonicTerm {
    int row = 0;
    int col = 0;
    cx amplitude{0.0, 0.0};
    double frequency = 0.0;
};

// General driven-system propagator for Hamiltonians given as a static real
// diagonal plus harmonic coupling terms. Used for models whose couplings are
// not generated by a single shared control operator.
PropagationResult propagate_terms(const Eigen::VectorXd& diagonal,
                                  const std::vector<HarmonicTerm>& terms,
                                  const Eigen::VectorXcd& initial, double duration,
                                  double tol = kDefaultExactTol,
                                  const TrajectoryObserver& observer = nullptr,
                                  const std::atomic<bool>* stop = nullptr);

}  // namespace rwaqoc
