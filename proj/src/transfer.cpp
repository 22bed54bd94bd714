#include "rwaqoc/transfer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "rwaqoc/analytic.hpp"
#include "rwaqoc/rng.hpp"

namespace rwaqoc {

namespace {

constexpr double kPi = std::numbers::pi;

// Reflect an unconstrained coordinate into [0, hi]; keeps the simplex method
// unconstrained while the model sees bounded values.
double fold(double x, double hi) {
    x = std::abs(x);
    if (hi <= 0.0) return x;
    const double y = std::fmod(x, 2.0 * hi);
    return y <= hi ? y : 2.0 * hi - y;
}

double wrap_2pi(double a) {
    a = std::fmod(a, 2.0 * kPi);
    if (a < 0.0) a += 2.0 * kPi;
    return a;
}

int ground_level(const LevelSystem& system) {
    int g = 0;
    for (int k = 1; k < system.size(); ++k)
        if (system.energies[k] < system.energies[g]) g = k;
    return g;
}

struct Evaluator {
    const TransferProblem& problem;
    LevelGraph graph;
    std::vector<int> field_edges;
    std::vector<double> detunings;  // per edge
    GammaAssignment gamma;
    int fields = 0;
    double amp_cap = 0.0;
    double t_cap = 0.0;

    mutable Eigen::MatrixXcd g;
    mutable Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver;
    mutable Eigen::VectorXcd work;

    explicit Evaluator(const TransferProblem& p) : problem(p) {
        p.system.validate();
        graph = build_graph(p.system);
        if (!graph.is_tree()) {
            if (!graph.connected) throw DisconnectedGraphError("transfer system is not connected");
            throw CyclicGraphError("transfer system has a cycle");
        }
        fields = static_cast<int>(p.frequencies.size());
        if (fields != static_cast<int>(graph.edges.size()))
            throw Error("optimize_transfer: expected one field per tree edge");
        if (p.initial.size() != p.system.size() || p.goal.size() != p.system.size())
            throw Error("optimize_transfer: state dimension mismatch");

        field_edges = p.field_edges;
        if (field_edges.empty())
            field_edges = assign_fields(p.system, graph, p.frequencies);
        if (static_cast<int>(field_edges.size()) != fields)
            throw Error("optimize_transfer: assignment size mismatch");

        detunings.assign(graph.edges.size(), 0.0);
        std::vector<char> driven(graph.edges.size(), 0);
        for (int f = 0; f < fields; ++f) {
            const int e = field_edges[f];
            if (driven[e]) throw DuplicateDriveError("two fields on one edge");
            driven[e] = 1;
            detunings[e] = graph.edges[e].frequency - p.frequencies[f];
        }
        gamma = assign_gamma(graph, detunings);

        amp_cap = p.amplitude_cap;
        if (amp_cap <= 0.0) {
            double min_omega = p.frequencies[0];
            for (double w : p.frequencies) min_omega = std::min(min_omega, w);
            const double nu = min_neglected_frequency(graph, p.frequencies, field_edges);
            amp_cap = std::min(0.05 * min_omega, 0.02 * nu);
        }
        t_cap = p.duration_cap;
        if (t_cap <= 0.0) t_cap = 10.0 * kPi / (amp_cap * std::sqrt(static_cast<double>(fields)));

        g.resize(graph.n, graph.n);
        work.resize(graph.n);
    }

    double evaluate(const std::vector<double>& amplitudes, const std::vector<double>& phases,
                    double duration) const {
        g.setZero();
        for (int f = 0; f < fields; ++f) {
            const Edge& e = graph.edges[field_edges[f]];
            const cx v = 0.5 * std::polar(amplitudes[f], phases[f]) * e.coupling;
            g(e.up, e.lo) = v;
            g(e.lo, e.up) = std::conj(v);
        }
        for (int k = 0; k < graph.n; ++k) g(k, k) = -gamma.gamma[k];

        solver.compute(g);
        work = solver.eigenvectors().adjoint() * problem.initial;
        for (int k = 0; k < graph.n; ++k)
            work(k) *= std::polar(1.0, -solver.eigenvalues()(k) * duration);
        work = solver.eigenvectors() * work;

        // Interaction-frame coefficients: c_k(T) = e^{-i gamma_k T} b_k(T).
        cx overlap(0.0, 0.0);
        for (int k = 0; k < graph.n; ++k)
            overlap += std::conj(problem.goal(k)) * std::polar(1.0, -gamma.gamma[k] * duration) *
                       work(k);
        return std::clamp(1.0 - std::norm(overlap), 0.0, 1.0);
    }

    double operator()(const Eigen::VectorXd& x) const {
        thread_local std::vector<double> amps, phases;
        amps.resize(fields);
        phases.resize(fields);
        for (int f = 0; f < fields; ++f) {
            amps[f] = fold(x(f), amp_cap);
            phases[f] = x(fields + f);
        }
        return evaluate(amps, phases, fold(x(2 * fields), t_cap));
    }
};

// Structured first guess. For a star driven from its center the closed form
// is exact; for general trees amplitudes follow the goal mass below each
// edge and phases the goal phase drops across it.
bool star_seed(const Evaluator& ev, Eigen::VectorXd& x0) {
    const LevelGraph& graph = ev.graph;
    const int n = graph.n;
    int center = -1;
    for (int v = 0; v < n; ++v)
        if (static_cast<int>(graph.adjacency[v].size()) == n - 1) center = v;
    if (center < 0) return false;
    if (std::norm(ev.problem.initial(center)) < 1.0 - 1e-9) return false;
    for (const Edge& e : graph.edges)
        if (e.lo != center) return false;  // closed form needs every leg above the center

    double dsum = 0.0;
    for (double d : ev.detunings) dsum += d;
    const double dmean = dsum / static_cast<double>(ev.detunings.size());
    for (double d : ev.detunings)
        if (std::abs(d - dmean) > 1e-9 * std::max(1.0, std::abs(dmean))) return false;

    // Leg order: vertices != center ascending; remap to field order below.
    std::vector<int> leg_of_vertex(n, -1);
    StarGoal goal;
    goal.xi.assign(n, 0.0);
    goal.beta.assign(n, 0.0);
    {
        // Rotate the global phase onto the center component.
        cx global(1.0, 0.0);
        if (std::abs(ev.problem.goal(center)) > 0.0)
            global = ev.problem.goal(center) / std::abs(ev.problem.goal(center));
        int leg = 1;
        goal.xi[0] = std::abs(ev.problem.goal(center));
        for (int v = 0; v < n; ++v) {
            if (v == center) continue;
            const cx g = ev.problem.goal(v) / global;
            goal.xi[leg] = std::abs(g);
            goal.beta[leg] = std::arg(g);
            leg_of_vertex[v] = leg;
            ++leg;
        }
        double norm2 = 0.0;
        for (double xi : goal.xi) norm2 += xi * xi;
        if (std::abs(norm2 - 1.0) > 1e-9) return false;
        const double s = 1.0 / std::sqrt(norm2);
        for (double& xi : goal.xi) xi *= s;
    }

    // Request amplitudes already proportional to the goal moduli, scaled so
    // the largest one sits just inside the cap.
    const double leg_mass = std::sqrt(std::max(0.0, 1.0 - goal.xi[0] * goal.xi[0]));
    if (leg_mass < 1e-12) return false;  // goal == initial handled elsewhere
    double xi_max = 0.0;
    for (std::size_t k = 1; k < goal.xi.size(); ++k) xi_max = std::max(xi_max, goal.xi[k]);
    const double budget = 0.9 * ev.amp_cap * leg_mass / xi_max;
    std::vector<double> request(n - 1);
    for (int k = 1; k < n; ++k) request[k - 1] = budget * goal.xi[k] / leg_mass;

    const ControlSolution sol = star_solve(goal, request, -dmean);
    if (!sol.reachable || sol.duration > ev.t_cap) return false;

    for (int f = 0; f < ev.fields; ++f) {
        const Edge& e = ev.graph.edges[ev.field_edges[f]];
        const int leg = leg_of_vertex[e.up];
        x0(f) = sol.amplitudes[leg - 1];
        // The generator amplitude carries an extra quarter turn relative to
        // the closed-form drive.
        x0(ev.fields + f) = sol.phases[leg - 1] + 0.5 * kPi;
    }
    x0(2 * ev.fields) = sol.duration;
    return true;
}

void tree_seed(const Evaluator& ev, Eigen::VectorXd& x0) {
    const LevelGraph& graph = ev.graph;
    const int n = graph.n;

    int root = 0;
    for (int v = 1; v < n; ++v)
        if (std::norm(ev.problem.initial(v)) > std::norm(ev.problem.initial(root))) root = v;

    std::vector<int> parent(n, -1), order;
    {
        std::vector<char> seen(n, 0);
        order.push_back(root);
        seen[root] = 1;
        for (std::size_t qi = 0; qi < order.size(); ++qi) {
            const int v = order[qi];
            for (int ei : graph.adjacency[v]) {
                const int w = graph.other_end(ei, v);
                if (!seen[w]) {
                    seen[w] = 1;
                    parent[w] = v;
                    order.push_back(w);
                }
            }
        }
    }
    std::vector<double> mass(n, 0.0);
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        mass[*it] += std::norm(ev.problem.goal(*it));
        if (parent[*it] >= 0) mass[parent[*it]] += mass[*it];
    }

    auto goal_phase = [&](int v) {
        return std::abs(ev.problem.goal(v)) > 1e-6 ? std::arg(ev.problem.goal(v)) : 0.0;
    };

    double sum2 = 0.0;
    for (int f = 0; f < ev.fields; ++f) {
        const Edge& e = graph.edges[ev.field_edges[f]];
        const int child = parent[e.up] == e.lo ? e.up : e.lo;
        const int par = child == e.up ? e.lo : e.up;
        const double a = ev.amp_cap * (0.2 + 0.75 * std::sqrt(std::min(1.0, mass[child])));
        x0(f) = a;
        sum2 += a * a;
        double alpha = goal_phase(child) - goal_phase(par) + 0.5 * kPi;
        if (child != e.up) alpha = -alpha;  // phase convention follows the edge orientation
        x0(ev.fields + f) = alpha;
    }
    double dbar = 0.0;
    for (double d : ev.detunings) dbar += std::abs(d);
    dbar /= static_cast<double>(ev.detunings.size());
    x0(2 * ev.fields) = std::min(ev.t_cap, kPi / std::sqrt(dbar * dbar + sum2));
}

}  // namespace

SimplexConfig transfer_simplex_defaults() {
    SimplexConfig cfg;
    cfg.max_evaluations = 150000;
    cfg.starts = 36;
    cfg.restarts = 2;
    cfg.stop_objective = 1e-12;
    return cfg;
}

double min_neglected_frequency(const LevelGraph& graph, const std::vector<double>& frequencies,
                               const std::vector<int>& field_edges) {
    double nu = std::numeric_limits<double>::infinity();
    for (std::size_t f = 0; f < frequencies.size(); ++f) {
        for (std::size_t e = 0; e < graph.edges.size(); ++e) {
            nu = std::min(nu, graph.edges[e].frequency + frequencies[f]);
            if (static_cast<int>(e) == field_edges[f]) continue;
            nu = std::min(nu, std::abs(graph.edges[e].frequency - frequencies[f]));
        }
    }
    return nu;
}

TransferProblem make_transfer_problem(LevelSystem system, double delta, Eigen::VectorXcd goal,
                                      std::uint64_t seed) {
    TransferProblem p;
    p.system = std::move(system);
    p.delta = delta;
    p.goal = std::move(goal);
    p.seed = seed;

    const LevelGraph graph = build_graph(p.system);
    for (std::size_t e = 0; e < graph.edges.size(); ++e) {
        const double omega = graph.edges[e].frequency - delta;
        if (!(omega > 0.0)) throw Error("make_transfer_problem: nonpositive drive frequency");
        p.frequencies.push_back(omega);
        p.field_edges.push_back(static_cast<int>(e));
    }
    p.initial = Eigen::VectorXcd::Zero(p.system.size());
    p.initial(ground_level(p.system)) = 1.0;
    return p;
}

double rwa_transfer_infidelity(const TransferProblem& problem,
                               const std::vector<double>& amplitudes,
                               const std::vector<double>& phases, double duration) {
    const Evaluator ev(problem);
    return ev.evaluate(amplitudes, phases, duration);
}

TransferSolution optimize_transfer(const TransferProblem& problem, const SimplexConfig& config) {
    const Evaluator ev(problem);
    const int fields = ev.fields;
    const int dim = 2 * fields + 1;

    TransferSolution best;
    best.seed = problem.seed;
    best.amplitudes.assign(fields, 0.5 * ev.amp_cap);
    best.phases.assign(fields, 0.0);
    best.duration = 0.0;
    best.rwa_infidelity = infidelity(problem.goal, problem.initial);  // T = 0 branch
    best.evaluations = 1;

    const double stop = config.stop_objective;
    if (!(stop > 0.0) || best.rwa_infidelity > stop) {
        SimplexConfig run = config;
        run.initial_scale.assign(dim, 0.0);
        for (int f = 0; f < fields; ++f) {
            run.initial_scale[f] = 0.1 * ev.amp_cap;
            run.initial_scale[fields + f] = 0.25 * kPi;
        }
        const double rabi_nominal = 0.7 * ev.amp_cap * std::sqrt(static_cast<double>(fields));
        run.initial_scale[dim - 1] = 0.25 * kPi / rabi_nominal;

        const int starts = std::max(1, config.starts);
        const long slice = std::max<long>(20 * dim, config.max_evaluations / starts);
        Eigen::VectorXd x0(dim);
        Eigen::VectorXd best_x;
        double best_f = best.rwa_infidelity + 1.0;

        // Fresh starts keep launching while budget remains; the slice size is
        // fixed so a stubborn landscape gets breadth, not one deep run.
        for (int start = 0;; ++start) {
            const long remaining = config.max_evaluations - best.evaluations;
            if (remaining < dim + 2) break;
            if (stop > 0.0 && best_f <= stop) break;
            run.max_evaluations = std::min(slice, remaining);

            if (start == 0) {
                if (!star_seed(ev, x0)) tree_seed(ev, x0);
            } else {
                Rng rng(mix_seed(problem.seed, 0xa11ce + static_cast<std::uint64_t>(start)));
                double sum2 = 0.0;
                for (int f = 0; f < fields; ++f) {
                    x0(f) = ev.amp_cap * rng.uniform(0.15, 1.0);
                    sum2 += x0(f) * x0(f);
                    x0(fields + f) = rng.uniform(0.0, 2.0 * kPi);
                }
                x0(dim - 1) =
                    std::min(ev.t_cap, kPi / std::sqrt(sum2) * rng.uniform(0.4, 4.0));
            }

            const NelderMeadResult r = nelder_mead(std::cref(ev), x0, run);
            best.evaluations += r.evaluations;
            if (r.f < best_f) {
                best_f = r.f;
                best_x = r.x;
            }
        }

        // Intensification pass around the incumbent with tightened scales.
        const long polish_budget = config.max_evaluations - best.evaluations;
        if (best_x.size() == dim && polish_budget > dim + 2 &&
            !(stop > 0.0 && best_f <= stop)) {
            SimplexConfig polish = run;
            polish.max_evaluations = polish_budget;
            for (double& scale : polish.initial_scale) scale *= 0.05;
            const NelderMeadResult r = nelder_mead(std::cref(ev), best_x, polish);
            best.evaluations += r.evaluations;
            if (r.f < best_f) {
                best_f = r.f;
                best_x = r.x;
            }
        }

        if (best_x.size() == dim && best_f < best.rwa_infidelity) {
            best.rwa_infidelity = best_f;
            for (int f = 0; f < fields; ++f) {
                best.amplitudes[f] = fold(best_x(f), ev.amp_cap);
                best.phases[f] = wrap_2pi(best_x(fields + f));
            }
            best.duration = fold(best_x(dim - 1), ev.t_cap);
        }
    }

    best.rwa_success = best.rwa_infidelity <= problem.epsilon;
    return best;
}

DriveSet solution_drives(const TransferProblem& problem, const TransferSolution& solution) {
    if (solution.amplitudes.size() != problem.frequencies.size())
        throw Error("solution_drives: field count mismatch");
    DriveSet drives;
    for (std::size_t f = 0; f < problem.frequencies.size(); ++f) {
        DriveField field;
        field.amplitude = std::polar(solution.amplitudes[f], solution.phases[f]);
        field.omega = problem.frequencies[f];
        drives.fields.push_back(field);
    }
    drives.edge_of_field = problem.field_edges;
    if (drives.edge_of_field.empty()) {
        const LevelGraph graph = build_graph(problem.system);
        drives.edge_of_field = assign_fields(problem.system, graph, problem.frequencies);
    }
    return drives;
}

void double_check(const TransferProblem& problem, TransferSolution& solution, double tol) {
    const LevelGraph graph = build_graph(problem.system);
    const DriveSet drives = solution_drives(problem, solution);

    const StateVector psi0 = make_state(problem.initial, Frame::Lab, 0.0);
    const PropagationResult res =
        propagate_exact(problem.system, graph, drives, psi0, solution.duration, tol);
    const StateVector c = frame_transform(res.state, Frame::Interaction, problem.system);
    const StateVector goal = make_state(problem.goal, Frame::Interaction, solution.duration);

    solution.exact_infidelity = infidelity(goal, c);
    solution.exact_success = solution.rwa_success && *solution.exact_infidelity <= problem.epsilon;
    solution.exact_stats = res.stats;
}

}  // namespace rwaqoc
