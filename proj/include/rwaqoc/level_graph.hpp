#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "rwaqoc/level_system.hpp"

namespace rwaqoc {

// Undirected edge oriented by energy: up is the higher-energy vertex.
struct Edge {
    int up = 0;
    int lo = 0;
    cx coupling{1.0, 0.0};  // control element for (row up, col lo)
    double frequency = 0.0;  // E_up - E_lo > 0
};

// Level scheme as an undirected graph: one vertex per level, one edge per
// nonzero coupling.
struct LevelGraph {
    int n = 0;
    std::vector<Edge> edges;
    std::vector<std::vector<int>> adjacency;  // vertex -> incident edge indices
    bool connected = false;
    bool acyclic = false;

    bool is_tree() const { return connected && acyclic; }
    int other_end(int edge_index, int vertex) const {
        const Edge& e = edges[edge_index];
        return e.up == vertex ? e.lo : e.up;
    }
    // Edge index between two vertices, or -1.
    int find_edge(int a, int b) const;
};

LevelGraph build_graph(const LevelSystem& system);

// One pruning step: `vertex` was pendant when removed, `successor` is the
// unique neighbour it was attached to.
struct PruneStep {
    int vertex = 0;
    int successor = 0;
};

// Removal sequence of length N-1; the remaining vertex is the root.
// Pendants are removed in rounds, ascending index within a round; when only
// two vertices remain the higher index is removed, so the root of a single
// edge is its lower vertex.
std::vector<PruneStep> prune_order(const LevelGraph& graph);

// Per-level rotating-frame weights solving gamma_k - gamma_j + delta_kj = 0
// on every edge.
struct GammaAssignment {
    std::vector<double> gamma;
    int root = 0;
    std::vector<double> residuals;  // per edge, aligned with graph.edges
    double max_relative_residual = 0.0;
};

inline constexpr double kGammaResidualTol = 1e-12;

// detunings[e] is the signed value E_up - E_lo - omega_e for edge e.
// Requires a connected acyclic graph.
GammaAssignment assign_gamma(const LevelGraph& graph,
                             const std::vector<double>& detunings,
                             double root_value = 0.0);

struct CycleReport {
    std::vector<int> vertices;  // closed walk, first == last omitted
    double detuning_sum = 0.0;
};

struct CycleConsistency {
    std::vector<CycleReport> blocking_cycles;  // cycles with nonzero sum
    std::optional<GammaAssignment> assignment;  // present iff all sums vanish
    bool reducible() const { return blocking_cycles.empty(); }
};

// For each fundamental cycle (w.r.t. a spanning tree) computes the signed
// detuning sum; a nonzero sum blocks the time-independent reduction. When
// every sum vanishes the spanning-tree assignment is returned.
CycleConsistency check_cycle_consistency(const LevelGraph& graph,
                                         const std::vector<double>& detunings,
                                         double root_value = 0.0);

}  // namespace rwaqoc
