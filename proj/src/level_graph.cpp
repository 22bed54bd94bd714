#include "rwaqoc/level_graph.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace rwaqoc {

int LevelGraph::find_edge(int a, int b) const {
    for (int ei : adjacency[a]) {
        if (other_end(ei, a) == b) return ei;
    }
    return -1;
}

LevelGraph build_graph(const LevelSystem& system) {
    system.validate();
    LevelGraph g;
    g.n = system.size();
    g.adjacency.assign(g.n, {});
    for (const Coupling& c : system.couplings) {
        Edge e;
        e.up = c.k;
        e.lo = c.j;
        e.coupling = c.value;
        if (system.energies[e.up] < system.energies[e.lo]) {
            std::swap(e.up, e.lo);
            e.coupling = std::conj(e.coupling);
        }
        e.frequency = system.energies[e.up] - system.energies[e.lo];
        const int idx = static_cast<int>(g.edges.size());
        g.edges.push_back(e);
        g.adjacency[e.up].push_back(idx);
        g.adjacency[e.lo].push_back(idx);
    }
    for (auto& inc : g.adjacency) std::sort(inc.begin(), inc.end());

    // Depth-first traversal from vertex 0 for connectivity; a forest has
    // exactly n - components edges, anything more implies a cycle.
    std::vector<char> seen(g.n, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int reached = 1;
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        for (int ei : g.adjacency[v]) {
            const int w = g.other_end(ei, v);
            if (!seen[w]) {
                seen[w] = 1;
                ++reached;
                stack.push_back(w);
            }
        }
    }
    g.connected = (reached == g.n);

    int components = 0;
    std::fill(seen.begin(), seen.end(), 0);
    for (int s = 0; s < g.n; ++s) {
        if (seen[s]) continue;
        ++components;
        stack.assign(1, s);
        seen[s] = 1;
        while (!stack.empty()) {
            const int v = stack.back();
            stack.pop_back();
            for (int ei : g.adjacency[v]) {
                const int w = g.other_end(ei, v);
                if (!seen[w]) {
                    seen[w] = 1;
                    stack.push_back(w);
                }
            }
        }
    }
    g.acyclic = (static_cast<int>(g.edges.size()) == g.n - components);
    return g;
}

namespace {

void require_tree(const LevelGraph& graph) {
    if (!graph.connected) throw DisconnectedGraphError("graph is not connected");
    if (!graph.acyclic) throw CyclicGraphError("graph has a cycle");
}

// Signed detuning of `vertex` relative to `other` across edge e.
double oriented_detuning(const Edge& e, double detuning, int vertex) {
    return vertex == e.up ? detuning : -detuning;
}

}  // namespace

std::vector<PruneStep> prune_order(const LevelGraph& graph) {
    require_tree(graph);
    const int n = graph.n;
    std::vector<PruneStep> steps;
    steps.reserve(n - 1);

    std::vector<int> degree(n, 0);
    std::vector<char> removed(n, 0);
    for (int v = 0; v < n; ++v) degree[v] = static_cast<int>(graph.adjacency[v].size());

    int remaining = n;
    while (remaining > 2) {
        std::vector<int> pendants;
        for (int v = 0; v < n; ++v)
            if (!removed[v] && degree[v] == 1) pendants.push_back(v);
        for (int v : pendants) {
            int succ = -1;
            for (int ei : graph.adjacency[v]) {
                const int w = graph.other_end(ei, v);
                if (!removed[w]) succ = w;
            }
            steps.push_back({v, succ});
            removed[v] = 1;
            --degree[succ];
            --remaining;
        }
    }
    if (remaining == 2) {
        // Final pair: keep the lower index as root.
        int a = -1, b = -1;
        for (int v = 0; v < n; ++v)
            if (!removed[v]) (a < 0 ? a : b) = v;
        steps.push_back({b, a});
    }
    return steps;
}

GammaAssignment assign_gamma(const LevelGraph& graph, const std::vector<double>& detunings,
                             double root_value) {
    require_tree(graph);
    if (detunings.size() != graph.edges.size())
        throw Error("assign_gamma: expected one detuning per edge");

    const auto steps = prune_order(graph);
    GammaAssignment out;
    out.gamma.assign(graph.n, 0.0);
    std::vector<char> assigned(graph.n, 0);

    int root = -1;
    {
        std::vector<char> listed(graph.n, 0);
        for (const PruneStep& s : steps) listed[s.vertex] = 1;
        for (int v = 0; v < graph.n; ++v)
            if (!listed[v]) root = v;
    }
    out.root = root;
    out.gamma[root] = root_value;
    assigned[root] = 1;

    // Re-add vertices in reverse prune order: gamma_k = gamma_j - delta(k|j).
    for (auto it = steps.rbegin(); it != steps.rend(); ++it) {
        const int k = it->vertex;
        const int j = it->successor;
        const int ei = graph.find_edge(k, j);
        const double d = oriented_detuning(graph.edges[ei], detunings[ei], k);
        out.gamma[k] = out.gamma[j] - d;
        assigned[k] = 1;
    }

    out.residuals.resize(graph.edges.size());
    for (std::size_t e = 0; e < graph.edges.size(); ++e) {
        const Edge& edge = graph.edges[e];
        const double r = out.gamma[edge.up] - out.gamma[edge.lo] + detunings[e];
        out.residuals[e] = r;
        out.max_relative_residual =
            std::max(out.max_relative_residual, std::abs(r) / std::max(1.0, std::abs(detunings[e])));
    }
    return out;
}

CycleConsistency check_cycle_consistency(const LevelGraph& graph,
                                         const std::vector<double>& detunings,
                                         double root_value) {
    if (!graph.connected) throw DisconnectedGraphError("graph is not connected");
    if (detunings.size() != graph.edges.size())
        throw Error("check_cycle_consistency: expected one detuning per edge");

    // Breadth-first spanning tree from vertex 0, lowest neighbour first.
    const int n = graph.n;
    std::vector<int> parent(n, -1), parent_edge(n, -1), order;
    std::vector<char> in_tree_edge(graph.edges.size(), 0);
    {
        std::vector<char> seen(n, 0);
        std::vector<int> queue{0};
        seen[0] = 1;
        for (std::size_t qi = 0; qi < queue.size(); ++qi) {
            const int v = queue[qi];
            order.push_back(v);
            for (int ei : graph.adjacency[v]) {
                const int w = graph.other_end(ei, v);
                if (!seen[w]) {
                    seen[w] = 1;
                    parent[w] = v;
                    parent_edge[w] = ei;
                    in_tree_edge[ei] = 1;
                    queue.push_back(w);
                }
            }
        }
    }

    std::vector<double> gamma(n, 0.0);
    for (int v : order) {
        if (parent[v] < 0) continue;
        const int ei = parent_edge[v];
        const double d = oriented_detuning(graph.edges[ei], detunings[ei], v);
        gamma[v] = gamma[parent[v]] - d;
    }

    CycleConsistency result;
    for (std::size_t e = 0; e < graph.edges.size(); ++e) {
        if (in_tree_edge[e]) continue;
        const Edge& edge = graph.edges[e];
        const double sum = gamma[edge.up] - gamma[edge.lo] + detunings[e];
        if (std::abs(sum) > kGammaResidualTol * std::max(1.0, std::abs(detunings[e]))) {
            // Fundamental cycle: tree paths from both endpoints to their
            // lowest common ancestor, closed by the chord.
            std::vector<int> up_path, lo_path;
            {
                std::vector<int> depth(n, 0);
                for (int v : order)
                    if (parent[v] >= 0) depth[v] = depth[parent[v]] + 1;
                int a = edge.up, b = edge.lo;
                while (depth[a] > depth[b]) {
                    up_path.push_back(a);
                    a = parent[a];
                }
                while (depth[b] > depth[a]) {
                    lo_path.push_back(b);
                    b = parent[b];
                }
                while (a != b) {
                    up_path.push_back(a);
                    lo_path.push_back(b);
                    a = parent[a];
                    b = parent[b];
                }
                up_path.push_back(a);
            }
            CycleReport cycle;
            cycle.vertices = up_path;
            for (auto it = lo_path.rbegin(); it != lo_path.rend(); ++it)
                cycle.vertices.push_back(*it);
            std::rotate(cycle.vertices.begin(),
                        std::min_element(cycle.vertices.begin(), cycle.vertices.end()),
                        cycle.vertices.end());
            cycle.detuning_sum = sum;
            result.blocking_cycles.push_back(std::move(cycle));
        }
    }

    if (result.blocking_cycles.empty()) {
        if (graph.acyclic) {
            result.assignment = assign_gamma(graph, detunings, root_value);
        } else {
            // Spanning-tree assignment; chord residuals vanish by the check.
            GammaAssignment out;
            out.gamma = gamma;
            out.root = 0;
            const double shift = root_value - gamma[0];
            for (double& gv : out.gamma) gv += shift;
            out.residuals.resize(graph.edges.size());
            for (std::size_t e = 0; e < graph.edges.size(); ++e) {
                const Edge& edge = graph.edges[e];
                const double r = out.gamma[edge.up] - out.gamma[edge.lo] + detunings[e];
                out.residuals[e] = r;
                out.max_relative_residual = std::max(
                    out.max_relative_residual, std::abs(r) / std::max(1.0, std::abs(detunings[e])));
            }
            result.assignment = std::move(out);
        }
    }
    return result;
}

}  // namespace rwaqoc
