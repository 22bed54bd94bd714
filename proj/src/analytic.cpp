#include "rwaqoc/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace rwaqoc {

namespace {

double wrap_2pi(double angle) {
    const double two_pi = 2.0 * std::numbers::pi;
    angle = std::fmod(angle, two_pi);
    if (angle < 0.0) angle += two_pi;
    return angle;
}

// Phase of c_0 at time t beyond the e^{i Delta t / 2} factor.
double center_phase(double delta, double rabi, double half_angle) {
    return std::atan2(-(delta / rabi) * std::sin(half_angle), std::cos(half_angle));
}

}  // namespace

StarGoal StarGoal::from_state(const Eigen::VectorXcd& state) {
    StarGoal g;
    g.xi.resize(state.size());
    g.beta.resize(state.size());
    // Rotate the global phase so the center component is real nonnegative.
    cx global(1.0, 0.0);
    if (std::abs(state(0)) > 0.0) global = state(0) / std::abs(state(0));
    for (Eigen::Index k = 0; k < state.size(); ++k) {
        const cx v = state(k) / global;
        g.xi[k] = std::abs(v);
        g.beta[k] = k == 0 ? 0.0 : std::arg(v);
    }
    return g;
}

Eigen::VectorXcd StarGoal::state() const {
    Eigen::VectorXcd v(xi.size());
    for (std::size_t k = 0; k < xi.size(); ++k)
        v(k) = xi[k] * std::polar(1.0, k == 0 ? 0.0 : beta[k]);
    return v;
}

void StarGoal::validate() const {
    if (xi.size() < 2 || beta.size() != xi.size()) throw Error("StarGoal: bad sizes");
    double norm2 = 0.0;
    for (double x : xi) {
        if (x < 0.0) throw Error("StarGoal: moduli must be nonnegative");
        norm2 += x * x;
    }
    if (std::abs(norm2 - 1.0) > 1e-12) throw Error("StarGoal: not normalized");
}

Eigen::Vector2cd two_level_evolve(cx drive, double delta, double t) {
    return star_evolve({drive}, delta, t);
}

ControlSolution two_level_solve(const TwoLevelGoal& goal, double amplitude, double delta) {
    StarGoal star;
    star.xi = {std::cos(0.5 * goal.theta), std::sin(0.5 * goal.theta)};
    star.beta = {0.0, goal.phi};
    return star_solve(star, {amplitude}, delta);
}

Eigen::VectorXcd star_evolve(const std::vector<cx>& drives, double delta, double t) {
    const int n = static_cast<int>(drives.size()) + 1;
    double sum2 = 0.0;
    for (cx a : drives) sum2 += std::norm(a);
    const double rabi = std::sqrt(delta * delta + sum2);

    Eigen::VectorXcd c = Eigen::VectorXcd::Zero(n);
    if (rabi == 0.0) {
        c(0) = 1.0;
        return c;
    }
    const double half = 0.5 * rabi * t;
    const cx up = std::polar(1.0, 0.5 * delta * t);
    c(0) = up * (std::cos(half) - cx(0.0, 1.0) * (delta / rabi) * std::sin(half));
    for (int k = 1; k < n; ++k)
        c(k) = std::conj(up) * (drives[k - 1] / rabi) * std::sin(half);
    return c;
}

ControlSolution star_solve(const StarGoal& goal, const std::vector<double>& amplitudes,
                           double delta) {
    goal.validate();
    const std::size_t legs = goal.xi.size() - 1;
    if (amplitudes.size() != legs) throw Error("star_solve: one amplitude per leg expected");

    ControlSolution sol;
    sol.amplitudes.assign(legs, 0.0);
    sol.phases.assign(legs, 0.0);

    // Goal equals the initial state: nothing to drive.
    if (std::abs(goal.xi[0] - 1.0) < 1e-12) {
        sol.amplitudes = amplitudes;
        sol.status = SolveStatus::Reachable;
        sol.reachable = true;
        sol.duration = 0.0;
        double sum2 = delta * delta;
        for (double a : amplitudes) sum2 += a * a;
        sol.effective_rabi = std::sqrt(sum2);
        sol.max_reachable_theta = std::numbers::pi;
        return sol;
    }

    double budget2 = 0.0;
    for (std::size_t k = 0; k < legs; ++k) {
        if (amplitudes[k] < 0.0) throw Error("star_solve: amplitudes must be nonnegative");
        if (goal.xi[k + 1] > 0.0 && amplitudes[k] == 0.0) {
            sol.status = SolveStatus::InconsistentGoal;
            return sol;
        }
        budget2 += amplitudes[k] * amplitudes[k];
    }
    if (budget2 == 0.0) {
        sol.status = SolveStatus::InconsistentGoal;
        return sol;
    }

    const double budget = std::sqrt(budget2);
    const double rabi = std::sqrt(delta * delta + budget2);
    const double sin_half_theta =
        std::sqrt(std::max(0.0, 1.0 - goal.xi[0] * goal.xi[0]));  // leg mass of the goal
    sol.effective_rabi = rabi;
    sol.max_reachable_theta = 2.0 * std::asin(std::min(1.0, budget / rabi));

    // All legs share the same sin(At/2) envelope, so the amplitude ratios
    // must match the goal moduli; the total strength is preserved.
    for (std::size_t k = 0; k < legs; ++k)
        sol.amplitudes[k] = budget * goal.xi[k + 1] / sin_half_theta;

    const double sin_half = rabi * sin_half_theta / budget;
    if (sin_half > 1.0 + 1e-12) {
        sol.status = SolveStatus::Unreachable;
        return sol;
    }
    const double half = std::asin(std::min(1.0, sin_half));
    sol.duration = 2.0 * half / rabi;
    sol.status = SolveStatus::Reachable;
    sol.reachable = true;

    // Phase condition: the residual phase of c_0 is absorbed as a global
    // phase, the leg phases then follow from arg c_k - arg c_0 = beta_k.
    const double psi0 = center_phase(delta, rabi, half);
    for (std::size_t k = 0; k < legs; ++k)
        sol.phases[k] = wrap_2pi(goal.beta[k + 1] + delta * sol.duration + psi0);
    return sol;
}

Eigen::MatrixXcd star_generator(const std::vector<cx>& drives, double delta) {
    const int n = static_cast<int>(drives.size()) + 1;
    Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(n, n);
    for (int k = 1; k < n; ++k) {
        const cx v = 0.5 * generator_amplitude(drives[k - 1]);
        g(k, 0) = v;
        g(0, k) = std::conj(v);
        g(k, k) = -delta;
    }
    return g;
}

cx generator_amplitude(cx closed_form_drive) { return cx(0.0, 1.0) * closed_form_drive; }

}  // namespace rwaqoc
