#include "rwaqoc/rwa.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace rwaqoc {

std::vector<double> DriveSet::edge_detunings(const LevelGraph& graph) const {
    std::vector<double> out(graph.edges.size(), 0.0);
    for (int f = 0; f < count(); ++f) out[edge_of_field[f]] = detuning(graph, f);
    return out;
}

namespace {

double default_window(const LevelGraph& graph) {
    // 0.1 * smallest gap between distinct transition frequencies; with a
    // single edge fall back to a fraction of its own frequency.
    double min_gap = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < graph.edges.size(); ++a)
        for (std::size_t b = a + 1; b < graph.edges.size(); ++b)
            min_gap = std::min(min_gap, std::abs(graph.edges[a].frequency - graph.edges[b].frequency));
    if (!std::isfinite(min_gap)) min_gap = graph.edges.empty() ? 1.0 : graph.edges[0].frequency;
    return 0.1 * min_gap;
}

}  // namespace

std::vector<int> assign_fields(const LevelSystem& system, const LevelGraph& graph,
                               const std::vector<double>& frequencies, double window) {
    (void)system;
    if (window <= 0.0) window = default_window(graph);
    std::vector<int> assignment(frequencies.size(), -1);
    std::vector<int> field_on_edge(graph.edges.size(), -1);

    for (std::size_t f = 0; f < frequencies.size(); ++f) {
        int match = -1;
        int matches = 0;
        for (std::size_t e = 0; e < graph.edges.size(); ++e) {
            if (std::abs(graph.edges[e].frequency - frequencies[f]) < window) {
                match = static_cast<int>(e);
                ++matches;
            }
        }
        if (matches == 0)
            throw NoResonantTransitionError("field " + std::to_string(f) + " (omega=" +
                                            std::to_string(frequencies[f]) +
                                            ") matches no transition within window");
        if (matches > 1)
            throw AmbiguousResonanceError("field " + std::to_string(f) +
                                          " matches several transitions within window");
        if (field_on_edge[match] >= 0)
            throw DuplicateDriveError("fields " + std::to_string(field_on_edge[match]) + " and " +
                                      std::to_string(f) + " drive the same transition");
        field_on_edge[match] = static_cast<int>(f);
        assignment[f] = match;
    }
    return assignment;
}

DriveSet make_drive_set(const LevelSystem& system, const LevelGraph& graph,
                        const std::vector<DriveField>& fields, double window) {
    DriveSet drives;
    drives.fields = fields;
    std::vector<double> freqs(fields.size());
    for (std::size_t f = 0; f < fields.size(); ++f) {
        if (!(fields[f].omega > 0.0))
            throw Error("drive frequency must be positive");
        freqs[f] = fields[f].omega;
    }
    drives.edge_of_field = assign_fields(system, graph, freqs, window);
    return drives;
}

Eigen::MatrixXcd build_rwa_matrix(const LevelGraph& graph, const DriveSet& drives,
                                  bool allow_undriven) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(graph.n, graph.n);
    std::vector<char> driven(graph.edges.size(), 0);
    for (int f = 0; f < drives.count(); ++f) {
        const int ei = drives.edge_of_field[f];
        if (ei < 0 || ei >= static_cast<int>(graph.edges.size()))
            throw Error("build_rwa_matrix: field assigned to invalid edge");
        if (driven[ei])
            throw DuplicateDriveError("edge " + std::to_string(ei) + " driven by two fields");
        driven[ei] = 1;
        const Edge& e = graph.edges[ei];
        // Keep the near-resonant term only: A_f rides the positive-frequency
        // transition, its conjugate the mirror element.
        const cx v = 0.5 * drives.fields[f].amplitude * e.coupling;
        m(e.up, e.lo) += v;
        m(e.lo, e.up) += std::conj(v);
    }
    if (!allow_undriven) {
        for (std::size_t e = 0; e < graph.edges.size(); ++e)
            if (!driven[e])
                throw UnassignedEdgeError("coupled edge " + std::to_string(e) + " has no field");
    }
    return m;
}

EffectiveGenerator build_effective_generator(const Eigen::MatrixXcd& rwa_matrix,
                                             const GammaAssignment& gamma) {
    if (gamma.max_relative_residual > kGammaResidualTol)
        throw NonvanishingResidualsError("gamma residuals do not vanish (max relative " +
                                         std::to_string(gamma.max_relative_residual) + ")");
    if (rwa_matrix.rows() != static_cast<Eigen::Index>(gamma.gamma.size()))
        throw Error("build_effective_generator: dimension mismatch");
    EffectiveGenerator gen;
    gen.matrix = rwa_matrix;
    for (Eigen::Index k = 0; k < gen.matrix.rows(); ++k) gen.matrix(k, k) -= gamma.gamma[k];
    gen.gamma = gamma;
    return gen;
}

RwaValidityReport check_drive_validity(const LevelSystem& system, const LevelGraph& graph,
                                       const DriveSet& drives, double bound) {
    (void)system;
    RwaValidityReport report;
    report.bound = bound;
    for (int f = 0; f < drives.count(); ++f) {
        FieldValidity v;
        v.field = f;
        const double omega = drives.fields[f].omega;
        v.detuning_ratio = std::abs(drives.detuning(graph, f)) / omega;
        v.amplitude_ratio = std::abs(drives.fields[f].amplitude) / omega;
        report.worst_detuning_ratio = std::max(report.worst_detuning_ratio, v.detuning_ratio);
        report.worst_amplitude_ratio = std::max(report.worst_amplitude_ratio, v.amplitude_ratio);
        report.fields.push_back(v);
    }
    report.pass =
        std::max(report.worst_detuning_ratio, report.worst_amplitude_ratio) < bound;
    return report;
}

}  // namespace rwaqoc
