#pragma once

#include <Eigen/Dense>
#include <vector>

#include "rwaqoc/level_system.hpp"
#include "rwaqoc/random_instance.hpp"
#include "rwaqoc/rng.hpp"

namespace rwaqoc::testing {

// Tree-coupled system with unit couplings from an explicit edge list.
inline LevelSystem make_system(std::vector<double> energies,
                               std::vector<std::pair<int, int>> edges) {
    LevelSystem s;
    s.energies = std::move(energies);
    for (auto [a, b] : edges) s.couplings.push_back({a, b, cx(1.0, 0.0)});
    return s;
}

// Random tree system with well-separated transitions plus matching resonant
// drive frequencies shifted by a common detuning.
struct RandomTreeSystem {
    LevelSystem system;
    std::vector<double> frequencies;
    std::vector<int> field_edges;
};

inline RandomTreeSystem random_tree_system(int n, std::uint64_t seed, double detuning = 0.0) {
    RandomInstanceSpec spec;
    spec.n = n;
    spec.seed = seed;
    spec.detuning = detuning;
    const RandomInstance inst = random_instance(spec);
    return {inst.system, inst.frequencies, inst.field_edges};
}

inline Eigen::VectorXcd random_unit_state(int n, std::uint64_t seed) {
    Rng rng(seed);
    Eigen::VectorXcd v(n);
    for (int k = 0; k < n; ++k) v(k) = cx(rng.normal(), rng.normal());
    v.normalize();
    return v;
}

// Fixed-step fourth-order Runge-Kutta on i dy/dt = H y for a constant H;
// independent of the production integrator and of the eigendecomposition.
inline Eigen::VectorXcd rk4_constant(const Eigen::MatrixXcd& h, const Eigen::VectorXcd& y0,
                                     double duration, int steps) {
    Eigen::VectorXcd y = y0;
    const double dt = duration / steps;
    const cx mi(0.0, -1.0);
    for (int s = 0; s < steps; ++s) {
        const Eigen::VectorXcd k1 = mi * (h * y);
        const Eigen::VectorXcd k2 = mi * (h * (y + 0.5 * dt * k1));
        const Eigen::VectorXcd k3 = mi * (h * (y + 0.5 * dt * k2));
        const Eigen::VectorXcd k4 = mi * (h * (y + dt * k3));
        y += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return y;
}

}  // namespace rwaqoc::testing
