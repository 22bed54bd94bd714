#include "rwaqoc/json_io.hpp"

#include <fstream>

namespace rwaqoc {

json to_json(const LevelSystem& system) {
    json j;
    j["energies"] = system.energies;
    j["couplings"] = json::array();
    for (const Coupling& c : system.couplings)
        j["couplings"].push_back(
            {{"k", c.k}, {"j", c.j}, {"re", c.value.real()}, {"im", c.value.imag()}});
    return j;
}

LevelSystem level_system_from_json(const json& j) {
    LevelSystem system;
    system.energies = j.at("energies").get<std::vector<double>>();
    if (j.contains("couplings")) {
        for (const json& c : j.at("couplings")) {
            Coupling coupling;
            coupling.k = c.at("k").get<int>();
            coupling.j = c.at("j").get<int>();
            coupling.value = cx(c.value("re", 1.0), c.value("im", 0.0));
            system.couplings.push_back(coupling);
        }
    }
    system.validate();
    return system;
}

json to_json(const DriveSet& drives, const LevelGraph& graph) {
    json j;
    j["fields"] = json::array();
    for (const DriveField& f : drives.fields)
        j["fields"].push_back(
            {{"re", f.amplitude.real()}, {"im", f.amplitude.imag()}, {"omega", f.omega}});
    j["assignment"] = json::array();
    for (std::size_t f = 0; f < drives.edge_of_field.size(); ++f) {
        const Edge& e = graph.edges[drives.edge_of_field[f]];
        j["assignment"].push_back({static_cast<int>(f), e.up, e.lo});
    }
    return j;
}

DriveSet drive_set_from_json(const json& j, const LevelSystem& system, const LevelGraph& graph,
                             double window) {
    DriveSet drives;
    for (const json& f : j.at("fields")) {
        DriveField field;
        field.amplitude = cx(f.value("re", 0.0), f.value("im", 0.0));
        field.omega = f.at("omega").get<double>();
        drives.fields.push_back(field);
    }
    if (j.contains("assignment") && !j.at("assignment").empty()) {
        drives.edge_of_field.assign(drives.fields.size(), -1);
        for (const json& row : j.at("assignment")) {
            const int f = row.at(0).get<int>();
            const int k = row.at(1).get<int>();
            const int jj = row.at(2).get<int>();
            const int edge = graph.find_edge(k, jj);
            if (edge < 0)
                throw Error("drive assignment references missing coupling (" + std::to_string(k) +
                            "," + std::to_string(jj) + ")");
            if (f < 0 || f >= static_cast<int>(drives.fields.size()))
                throw Error("drive assignment references missing field");
            drives.edge_of_field[f] = edge;
        }
        for (int e : drives.edge_of_field)
            if (e < 0) throw Error("drive assignment incomplete");
    } else {
        std::vector<double> freqs;
        for (const DriveField& f : drives.fields) freqs.push_back(f.omega);
        drives.edge_of_field = assign_fields(system, graph, freqs, window);
    }
    return drives;
}

json state_to_json(const Eigen::VectorXcd& state) {
    json j = json::array();
    for (Eigen::Index k = 0; k < state.size(); ++k)
        j.push_back({{"re", state(k).real()}, {"im", state(k).imag()}});
    return j;
}

Eigen::VectorXcd state_from_json(const json& j) {
    const json& arr = j.is_array() ? j : j.at("state");
    Eigen::VectorXcd state(arr.size());
    Eigen::Index k = 0;
    for (const json& v : arr) {
        if (v.is_number())
            state(k) = cx(v.get<double>(), 0.0);
        else
            state(k) = cx(v.value("re", 0.0), v.value("im", 0.0));
        ++k;
    }
    return state;
}

json to_json(const DegeneracyReport& report) {
    json j;
    j["gap_tol"] = report.gap_tol;
    j["valid"] = report.valid();
    j["violations"] = json::array();
    for (const DegeneracyViolation& v : report.violations)
        j["violations"].push_back({{"first", {v.a.k, v.a.j}},
                                   {"second", {v.b.k, v.b.j}},
                                   {"gap", v.gap}});
    return j;
}

json to_json(const GammaAssignment& gamma) {
    json j;
    j["gamma"] = gamma.gamma;
    j["root"] = gamma.root;
    j["residuals"] = gamma.residuals;
    j["max_relative_residual"] = gamma.max_relative_residual;
    return j;
}

json to_json(const RwaValidityReport& report) {
    json j;
    j["bound"] = report.bound;
    j["pass"] = report.pass;
    j["worst_detuning_ratio"] = report.worst_detuning_ratio;
    j["worst_amplitude_ratio"] = report.worst_amplitude_ratio;
    j["fields"] = json::array();
    for (const FieldValidity& f : report.fields)
        j["fields"].push_back({{"field", f.field},
                               {"detuning_ratio", f.detuning_ratio},
                               {"amplitude_ratio", f.amplitude_ratio}});
    return j;
}

json to_json(const CycleConsistency& cycles) {
    json j;
    j["reducible"] = cycles.reducible();
    j["blocking_cycles"] = json::array();
    for (const CycleReport& c : cycles.blocking_cycles)
        j["blocking_cycles"].push_back({{"vertices", c.vertices}, {"detuning_sum", c.detuning_sum}});
    if (cycles.assignment) j["gamma"] = to_json(*cycles.assignment);
    return j;
}

json to_json(const TransferProblem& problem, const TransferSolution& solution) {
    json j;
    j["system"] = to_json(problem.system);
    j["frequencies"] = problem.frequencies;
    const LevelGraph graph = build_graph(problem.system);
    j["assignment"] = json::array();
    for (std::size_t f = 0; f < problem.field_edges.size(); ++f) {
        const Edge& e = graph.edges[problem.field_edges[f]];
        j["assignment"].push_back({static_cast<int>(f), e.up, e.lo});
    }
    j["delta"] = problem.delta;
    j["initial"] = state_to_json(problem.initial);
    j["goal"] = state_to_json(problem.goal);
    j["epsilon"] = problem.epsilon;
    j["amplitude_cap"] = problem.amplitude_cap;
    j["duration_cap"] = problem.duration_cap;
    j["seed"] = problem.seed;

    json s;
    s["amplitudes"] = solution.amplitudes;
    s["phases"] = solution.phases;
    s["duration"] = solution.duration;
    s["rwa_infidelity"] = solution.rwa_infidelity;
    if (solution.exact_infidelity)
        s["exact_infidelity"] = *solution.exact_infidelity;
    else
        s["exact_infidelity"] = nullptr;
    s["rwa_success"] = solution.rwa_success;
    s["exact_success"] = solution.exact_success;
    s["evaluations"] = solution.evaluations;
    s["seed"] = solution.seed;
    j["solution"] = s;
    return j;
}

void transfer_from_json(const json& j, TransferProblem& problem, TransferSolution& solution) {
    problem.system = level_system_from_json(j.at("system"));
    problem.frequencies = j.at("frequencies").get<std::vector<double>>();
    const LevelGraph graph = build_graph(problem.system);
    problem.field_edges.clear();
    if (j.contains("assignment")) {
        problem.field_edges.assign(problem.frequencies.size(), -1);
        for (const json& row : j.at("assignment")) {
            const int edge = graph.find_edge(row.at(1).get<int>(), row.at(2).get<int>());
            if (edge < 0) throw Error("assignment references missing coupling");
            problem.field_edges[row.at(0).get<int>()] = edge;
        }
    }
    problem.delta = j.value("delta", 0.0);
    problem.initial = state_from_json(j.at("initial"));
    problem.goal = state_from_json(j.at("goal"));
    problem.epsilon = j.value("epsilon", 1e-3);
    problem.amplitude_cap = j.value("amplitude_cap", 0.0);
    problem.duration_cap = j.value("duration_cap", 0.0);
    problem.seed = j.value("seed", std::uint64_t{1});

    solution = TransferSolution{};
    if (j.contains("solution")) {
        const json& s = j.at("solution");
        solution.amplitudes = s.at("amplitudes").get<std::vector<double>>();
        solution.phases = s.at("phases").get<std::vector<double>>();
        solution.duration = s.at("duration").get<double>();
        solution.rwa_infidelity = s.value("rwa_infidelity", 1.0);
        if (s.contains("exact_infidelity") && !s.at("exact_infidelity").is_null())
            solution.exact_infidelity = s.at("exact_infidelity").get<double>();
        solution.rwa_success = s.value("rwa_success", false);
        solution.exact_success = s.value("exact_success", false);
        solution.evaluations = s.value("evaluations", 0L);
        solution.seed = s.value("seed", std::uint64_t{0});
    }
}

json sweep_config_to_json(const SweepConfig& config) {
    json j;
    j["dimensions"] = config.dimensions;
    j["detunings"] = config.detunings;
    j["goals_per_cell"] = config.goals_per_cell;
    j["epsilon"] = config.epsilon;
    j["seed"] = config.master_seed;
    j["threads"] = config.threads;
    j["min_gap"] = config.min_gap;
    j["amp_cross_fraction"] = config.amp_cross_fraction;
    j["delta_headroom"] = config.delta_headroom;
    j["double_check_tol"] = config.double_check_tol;
    j["nelder_mead"] = {{"max_evaluations", config.simplex.max_evaluations},
                        {"starts", config.simplex.starts},
                        {"restarts", config.simplex.restarts},
                        {"stop_objective", config.simplex.stop_objective}};
    return j;
}

SweepConfig sweep_config_from_json(const json& j) {
    SweepConfig config;
    if (j.contains("dimensions")) config.dimensions = j.at("dimensions").get<std::vector<int>>();
    if (j.contains("detunings")) config.detunings = j.at("detunings").get<std::vector<double>>();
    config.goals_per_cell = j.value("goals_per_cell", config.goals_per_cell);
    config.epsilon = j.value("epsilon", config.epsilon);
    config.master_seed = j.value("seed", config.master_seed);
    config.threads = j.value("threads", config.threads);
    config.min_gap = j.value("min_gap", config.min_gap);
    config.amp_cross_fraction = j.value("amp_cross_fraction", config.amp_cross_fraction);
    config.delta_headroom = j.value("delta_headroom", config.delta_headroom);
    config.double_check_tol = j.value("double_check_tol", config.double_check_tol);
    if (j.contains("nelder_mead")) {
        const json& nm = j.at("nelder_mead");
        config.simplex.max_evaluations = nm.value("max_evaluations", config.simplex.max_evaluations);
        config.simplex.starts = nm.value("starts", config.simplex.starts);
        config.simplex.restarts = nm.value("restarts", config.simplex.restarts);
        config.simplex.stop_objective = nm.value("stop_objective", config.simplex.stop_objective);
    }
    config.validate();
    return config;
}

json to_json(const RydbergReport& report) {
    json j;
    j["duration"] = report.duration;
    j["infidelity"] = report.infidelity;
    j["finite_blockade"] = report.scenario.finite_blockade;
    j["blockade"] = report.scenario.blockade;
    j["rabi"] = json::array();
    for (const cx& omega : report.scenario.rabi)
        j["rabi"].push_back({{"re", omega.real()}, {"im", omega.imag()}});
    j["deltas"] = report.scenario.deltas;
    j["active"] = report.scenario.active;
    j["components"] = json::array();
    for (const auto& comp : report.components) {
        json labels = json::array();
        for (int v : comp) labels.push_back(kRydbergLabels[v]);
        j["components"].push_back(labels);
    }
    j["controllable_components"] = report.controllable_components;
    if (report.reoptimized_infidelity) {
        json r;
        r["infidelity"] = *report.reoptimized_infidelity;
        r["duration"] = report.reoptimized_duration;
        r["evaluations"] = report.evaluations;
        r["rabi"] = json::array();
        for (const cx& omega : report.reoptimized_rabi)
            r["rabi"].push_back({{"re", omega.real()}, {"im", omega.imag()}});
        j["reoptimized"] = r;
    }
    return j;
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);
    json j;
    in >> j;
    return j;
}

void save_json_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path);
    out << j.dump(2) << "\n";
}

}  // namespace rwaqoc
