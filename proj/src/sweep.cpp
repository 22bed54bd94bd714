#include "rwaqoc/sweep.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "rwaqoc/rng.hpp"

namespace rwaqoc {

void SweepConfig::validate() const {
    if (dimensions.empty() || detunings.empty()) throw Error("SweepConfig: empty grid");
    for (int n : dimensions)
        if (n < 2) throw Error("SweepConfig: dimensions must be >= 2");
    for (double d : detunings)
        if (!(d > 0.0)) throw Error("SweepConfig: detunings must be positive");
    if (goals_per_cell < 1) throw Error("SweepConfig: goals_per_cell must be >= 1");
    if (!(epsilon > 0.0)) throw Error("SweepConfig: epsilon must be positive");
}

namespace {

std::uint64_t cell_seed(const SweepConfig& config, int n, int delta_index, int goal_index) {
    std::uint64_t s = mix_seed(config.master_seed, static_cast<std::uint64_t>(n));
    s = mix_seed(s, static_cast<std::uint64_t>(delta_index) + 0x100);
    s = mix_seed(s, static_cast<std::uint64_t>(goal_index) + 0x10000);
    return s;
}

SweepRow run_cell(const SweepConfig& config, int n, int delta_index, int goal_index) {
    const double delta = config.detunings[delta_index];
    SweepRow row;
    row.n = n;
    row.delta = delta;
    row.seed = cell_seed(config, n, delta_index, goal_index);
    try {
        RandomInstanceSpec spec;
        spec.n = n;
        spec.seed = row.seed;
        spec.min_gap = config.min_gap;
        spec.detuning = delta;
        const RandomInstance inst = random_instance(spec);

        TransferProblem problem;
        problem.system = inst.system;
        problem.frequencies = inst.frequencies;
        problem.field_edges = inst.field_edges;
        problem.delta = delta;
        problem.goal = inst.goal;
        problem.initial = Eigen::VectorXcd::Zero(n);
        problem.initial(0) = 1.0;  // sorted spectrum, ground level first
        problem.epsilon = config.epsilon;
        problem.seed = row.seed;
        {
            const LevelGraph graph = build_graph(problem.system);
            double min_omega = problem.frequencies[0];
            for (double w : problem.frequencies) min_omega = std::min(min_omega, w);
            const double nu =
                min_neglected_frequency(graph, problem.frequencies, problem.field_edges);
            problem.amplitude_cap =
                std::min(0.05 * min_omega,
                         std::max(config.amp_cross_fraction * nu, config.delta_headroom * delta));
        }

        row.distance = hilbert_distance(problem.goal, problem.initial);

        TransferSolution sol = optimize_transfer(problem, config.simplex);
        double_check(problem, sol, config.double_check_tol);

        row.rwa_infidelity = sol.rwa_infidelity;
        row.exact_infidelity = sol.exact_infidelity.value_or(1.0);
        row.rwa_success = sol.rwa_success;
        row.exact_success = sol.exact_success;
        row.duration = sol.duration;
        row.evaluations = sol.evaluations;
    } catch (const std::exception& e) {
        row.error = e.what();
        row.rwa_success = false;
        row.exact_success = false;
    }
    return row;
}

void finalize(const SweepConfig& config, SweepResult& result) {
    std::sort(result.rows.begin(), result.rows.end(), [](const SweepRow& a, const SweepRow& b) {
        if (a.n != b.n) return a.n < b.n;
        if (a.delta != b.delta) return a.delta < b.delta;
        return a.seed < b.seed;
    });

    for (int n : config.dimensions) {
        for (double delta : config.detunings) {
            LambdaCell cell;
            cell.n = n;
            cell.delta = delta;
            for (const SweepRow& row : result.rows) {
                if (row.n != n || row.delta != delta) continue;
                ++cell.goals;
                if (row.rwa_success) cell.lambda_rwa += 1.0;
                if (row.exact_success) cell.lambda_exact += 1.0;
            }
            if (cell.goals > 0) {
                cell.lambda_rwa *= 100.0 / cell.goals;
                cell.lambda_exact *= 100.0 / cell.goals;
            }
            result.lambdas.push_back(cell);
        }
    }
    std::sort(result.lambdas.begin(), result.lambdas.end(),
              [](const LambdaCell& a, const LambdaCell& b) {
                  if (a.n != b.n) return a.n < b.n;
                  return a.delta < b.delta;
              });
}

struct CellIndex {
    int n;
    int delta_index;
    int goal_index;
};

std::vector<CellIndex> cell_list(const SweepConfig& config) {
    std::vector<CellIndex> cells;
    for (int n : config.dimensions)
        for (int di = 0; di < static_cast<int>(config.detunings.size()); ++di)
            for (int g = 0; g < config.goals_per_cell; ++g) cells.push_back({n, di, g});
    return cells;
}

}  // namespace

SweepResult run_sweep_serial(const SweepConfig& config) {
    config.validate();
    const auto t0 = std::chrono::steady_clock::now();
    SweepResult result;
    const auto cells = cell_list(config);
    result.rows.resize(cells.size());
    for (std::size_t i = 0; i < cells.size(); ++i)
        result.rows[i] = run_cell(config, cells[i].n, cells[i].delta_index, cells[i].goal_index);
    finalize(config, result);
    result.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return result;
}

SweepResult run_sweep(const SweepConfig& config) {
    config.validate();
    const auto t0 = std::chrono::steady_clock::now();
    SweepResult result;
    const auto cells = cell_list(config);
    result.rows.resize(cells.size());

#ifdef _OPENMP
    const int threads = config.threads > 0 ? config.threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
    for (long i = 0; i < static_cast<long>(cells.size()); ++i)
        result.rows[i] = run_cell(config, cells[i].n, cells[i].delta_index, cells[i].goal_index);
#else
    for (std::size_t i = 0; i < cells.size(); ++i)
        result.rows[i] = run_cell(config, cells[i].n, cells[i].delta_index, cells[i].goal_index);
#endif

    finalize(config, result);
    result.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return result;
}

std::string sweep_csv(const SweepResult& result) {
    std::string out =
        "n,delta,seed,distance,rwa_infidelity,exact_infidelity,rwa_success,exact_success,"
        "duration,evaluations,error\n";
    char buf[512];
    for (const SweepRow& r : result.rows) {
        std::snprintf(buf, sizeof(buf), "%d,%.3e,%llu,%.12e,%.12e,%.12e,%d,%d,%.12e,%ld,%s\n",
                      r.n, r.delta, static_cast<unsigned long long>(r.seed), r.distance,
                      r.rwa_infidelity, r.exact_infidelity, r.rwa_success ? 1 : 0,
                      r.exact_success ? 1 : 0, r.duration, r.evaluations, r.error.c_str());
        out += buf;
    }
    return out;
}

std::string lambda_summary_json(const SweepConfig& config, const SweepResult& result) {
    std::ostringstream os;
    char buf[256];
    os << "{\n  \"goals_per_cell\": " << config.goals_per_cell
       << ",\n  \"epsilon\": " << config.epsilon << ",\n  \"master_seed\": " << config.master_seed
       << ",\n  \"cells\": [\n";
    for (std::size_t i = 0; i < result.lambdas.size(); ++i) {
        const LambdaCell& c = result.lambdas[i];
        std::snprintf(buf, sizeof(buf),
                      "    {\"n\": %d, \"delta\": %.3e, \"goals\": %d, \"lambda_rwa\": %.2f, "
                      "\"lambda_exact\": %.2f}%s\n",
                      c.n, c.delta, c.goals, c.lambda_rwa, c.lambda_exact,
                      i + 1 < result.lambdas.size() ? "," : "");
        os << buf;
    }
    os << "  ]\n}\n";
    return os.str();
}

}  // namespace rwaqoc
