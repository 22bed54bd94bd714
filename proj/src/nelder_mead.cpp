#include "rwaqoc/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace rwaqoc {

void SimplexConfig::validate() const {
    if (!(reflection > 0.0) || !(expansion > 0.0) || !(contraction > 0.0) || !(shrink > 0.0))
        throw Error("SimplexConfig: coefficients must be positive");
    if (!(expansion > reflection))
        throw Error("SimplexConfig: expansion must exceed reflection");
    if (max_evaluations < 1) throw Error("SimplexConfig: max_evaluations must be positive");
}

namespace {

struct Simplex {
    std::vector<Eigen::VectorXd> x;
    std::vector<double> f;
    std::vector<int> order;  // vertex indices sorted by (f, index)

    void sort() {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return f[a] < f[b]; });
    }
    int best() const { return order.front(); }
    int worst() const { return order.back(); }
    int second_worst() const { return order[order.size() - 2]; }
};

double checked_eval(const Objective& objective, const Eigen::VectorXd& x, long& evaluations) {
    const double v = objective(x);
    ++evaluations;
    if (!std::isfinite(v)) throw ObjectiveNonFiniteError("objective returned a non-finite value");
    return v;
}

void seed_simplex(Simplex& s, const Eigen::VectorXd& center, const SimplexConfig& cfg,
                  const Objective& objective, long& evaluations) {
    const int n = static_cast<int>(center.size());
    s.x.assign(n + 1, center);
    s.f.assign(n + 1, 0.0);
    s.order.assign(n + 1, 0);
    for (int i = 0; i < n; ++i) {
        const double scale = i < static_cast<int>(cfg.initial_scale.size())
                                 ? cfg.initial_scale[i]
                                 : cfg.default_scale;
        s.x[i + 1](i) += scale;
    }
    for (int i = 0; i <= n; ++i) s.f[i] = checked_eval(objective, s.x[i], evaluations);
    s.sort();
}

}  // namespace

NelderMeadResult nelder_mead(const Objective& objective, const Eigen::VectorXd& x0,
                             const SimplexConfig& cfg) {
    cfg.validate();
    const int n = static_cast<int>(x0.size());
    if (n < 1) throw Error("nelder_mead: empty parameter vector");

    NelderMeadResult result;
    Simplex s;
    seed_simplex(s, x0, cfg, objective, result.evaluations);
    result.x = s.x[s.best()];
    result.f = s.f[s.best()];

    Eigen::VectorXd centroid(n), xr(n), xe(n), xc(n);
    int restarts_left = cfg.restarts;

    while (true) {
        const int best = s.best();
        const int worst = s.worst();

        if (s.f[best] < result.f) {
            result.f = s.f[best];
            result.x = s.x[best];
        }
        if (cfg.stop_objective > 0.0 && result.f <= cfg.stop_objective) {
            result.stop_reason = "target objective reached";
            break;
        }
        if (result.evaluations >= cfg.max_evaluations) {
            result.stop_reason = "max evaluations";
            break;
        }

        const double f_spread = s.f[worst] - s.f[best];
        double x_spread = 0.0;
        for (int i = 0; i <= n; ++i)
            x_spread = std::max(x_spread, (s.x[i] - s.x[best]).cwiseAbs().maxCoeff());
        const bool converged = f_spread <= cfg.tol_objective ||
                               x_spread <= cfg.tol_simplex * (1.0 + s.x[best].cwiseAbs().maxCoeff());
        if (converged) {
            if (restarts_left > 0 && result.evaluations < cfg.max_evaluations) {
                --restarts_left;
                ++result.restarts_used;
                seed_simplex(s, result.x, cfg, objective, result.evaluations);
                continue;
            }
            result.stop_reason = f_spread <= cfg.tol_objective ? "objective spread" : "simplex spread";
            break;
        }

        centroid.setZero();
        for (int i = 0; i <= n; ++i)
            if (i != worst) centroid += s.x[i];
        centroid /= static_cast<double>(n);

        xr = centroid + cfg.reflection * (centroid - s.x[worst]);
        const double fr = checked_eval(objective, xr, result.evaluations);

        if (fr < s.f[best]) {
            xe = centroid + cfg.expansion * (xr - centroid);
            const double fe = checked_eval(objective, xe, result.evaluations);
            if (fe < fr) {
                s.x[worst] = xe;
                s.f[worst] = fe;
            } else {
                s.x[worst] = xr;
                s.f[worst] = fr;
            }
        } else if (fr < s.f[s.second_worst()]) {
            s.x[worst] = xr;
            s.f[worst] = fr;
        } else {
            const bool outside = fr < s.f[worst];
            if (outside)
                xc = centroid + cfg.contraction * (xr - centroid);
            else
                xc = centroid - cfg.contraction * (centroid - s.x[worst]);
            const double fc = checked_eval(objective, xc, result.evaluations);
            if ((outside && fc <= fr) || (!outside && fc < s.f[worst])) {
                s.x[worst] = xc;
                s.f[worst] = fc;
            } else {
                for (int i = 0; i <= n; ++i) {
                    if (i == s.best()) continue;
                    s.x[i] = s.x[s.best()] + cfg.shrink * (s.x[i] - s.x[s.best()]);
                    s.f[i] = checked_eval(objective, s.x[i], result.evaluations);
                }
            }
        }
        s.sort();
    }

    return result;
}

}  // namespace rwaqoc
