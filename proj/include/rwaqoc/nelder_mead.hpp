#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "rwaqoc/types.hpp"

namespace rwaqoc {

struct SimplexConfig {
    double reflection = 1.0;
    double expansion = 2.0;
    double contraction = 0.5;
    double shrink = 0.5;
    long max_evaluations = 50000;
    double tol_simplex = 1e-10;    // max vertex distance from the best point
    double tol_objective = 1e-15;  // spread of vertex objective values
    int restarts = 2;              // re-seed the simplex around the incumbent
    int starts = 10;               // independent starts in multi-start drivers
    double stop_objective = 0.0;   // finish early once f_best drops below
    std::vector<double> initial_scale;  // per-coordinate; scalar fallback below
    double default_scale = 0.1;

    void validate() const;
};

struct NelderMeadResult {
    Eigen::VectorXd x;
    double f = 0.0;
    long evaluations = 0;
    int restarts_used = 0;
    std::string stop_reason;
};

using Objective = std::function<double(const Eigen::VectorXd&)>;

// Classic simplex direct search (reflect / expand / contract / shrink) with
// deterministic index tie-breaking. Throws ObjectiveNonFinite on NaN or
// infinite objective values.
NelderMeadResult nelder_mead(const Objective& objective, const Eigen::VectorXd& x0,
                             const SimplexConfig& config);

}  // namespace rwaqoc
