#include "rwaqoc/random_instance.hpp"

#include <algorithm>
#include <cmath>

#include "rwaqoc/rng.hpp"

namespace rwaqoc {

void RandomInstanceSpec::validate() const {
    if (n < 2) throw Error("RandomInstanceSpec: n must be >= 2");
    if (!(min_gap > 0.0)) throw Error("RandomInstanceSpec: min_gap must be positive");
    if (detuning < 0.0) throw Error("RandomInstanceSpec: detuning must be nonnegative");
}

std::vector<std::pair<int, int>> random_tree(int n, std::uint64_t seed) {
    std::vector<std::pair<int, int>> edges;
    if (n == 2) {
        edges.emplace_back(0, 1);
        return edges;
    }
    Rng rng(mix_seed(seed, 0x7ee5));
    std::vector<int> pruefer(n - 2);
    for (int& s : pruefer) s = rng.uniform_int(n);

    std::vector<int> degree(n, 1);
    for (int s : pruefer) ++degree[s];
    for (int s : pruefer) {
        int leaf = -1;
        for (int v = 0; v < n; ++v)
            if (degree[v] == 1) {
                leaf = v;
                break;
            }
        edges.emplace_back(leaf, s);
        --degree[leaf];
        --degree[s];
    }
    int a = -1, b = -1;
    for (int v = 0; v < n; ++v)
        if (degree[v] == 1) (a < 0 ? a : b) = v;
    edges.emplace_back(a, b);
    std::sort(edges.begin(), edges.end());
    return edges;
}

namespace {

bool gaps_ok(const std::vector<double>& energies, double min_gap) {
    std::vector<double> transitions;
    const int n = static_cast<int>(energies.size());
    for (int j = 0; j < n; ++j)
        for (int k = j + 1; k < n; ++k) transitions.push_back(energies[k] - energies[j]);
    std::sort(transitions.begin(), transitions.end());
    if (transitions.front() < min_gap) return false;  // includes adjacent-level gaps
    for (std::size_t i = 1; i < transitions.size(); ++i)
        if (transitions[i] - transitions[i - 1] < min_gap) return false;
    return true;
}

}  // namespace

RandomInstance random_instance(const RandomInstanceSpec& spec) {
    spec.validate();
    const double span = spec.energy_span > 0.0 ? spec.energy_span : static_cast<double>(spec.n);

    RandomInstance inst;
    Rng rng(mix_seed(spec.seed, 0x1257aace));

    std::vector<double> energies(spec.n);
    bool found = false;
    for (long attempt = 0; attempt < spec.max_tries; ++attempt) {
        for (double& e : energies) e = rng.uniform(0.0, span);
        std::sort(energies.begin(), energies.end());
        const double shift = energies.front();
        for (double& e : energies) e -= shift;  // ground at zero
        if (!gaps_ok(energies, spec.min_gap)) continue;
        // Every drive frequency must stay positive under the detuning.
        double min_transition = energies[1] - energies[0];
        for (int k = 2; k < spec.n; ++k)
            min_transition = std::min(min_transition, energies[k] - energies[k - 1]);
        if (min_transition <= spec.detuning + 0.25 * spec.min_gap) continue;
        found = true;
        break;
    }
    if (!found)
        throw ResampleExhaustedError("random_instance: gap constraint not met within " +
                                     std::to_string(spec.max_tries) + " tries");
    inst.system.energies = energies;

    const auto edges = random_tree(spec.n, spec.seed);
    for (auto [a, b] : edges) inst.system.couplings.push_back({a, b, cx(1.0, 0.0)});

    for (std::size_t e = 0; e < edges.size(); ++e) {
        auto [a, b] = edges[e];
        const double freq = std::abs(energies[a] - energies[b]);
        inst.frequencies.push_back(freq - spec.detuning);
        inst.field_edges.push_back(static_cast<int>(e));
    }

    inst.goal.resize(spec.n);
    for (int k = 0; k < spec.n; ++k) inst.goal(k) = cx(rng.normal(), rng.normal());
    inst.goal.normalize();
    return inst;
}

}  // namespace rwaqoc
