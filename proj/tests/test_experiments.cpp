#include <doctest.h>

#include <cmath>
#include <set>

#include "helpers.hpp"
#include "rwaqoc/rydberg.hpp"
#include "rwaqoc/sweep.hpp"

using namespace rwaqoc;

TEST_CASE("random_instance: two levels always give the single-edge tree") {
    for (std::uint64_t seed = 1; seed < 20; ++seed) {
        RandomInstanceSpec spec;
        spec.n = 2;
        spec.seed = seed;
        const auto inst = random_instance(spec);
        REQUIRE(inst.system.couplings.size() == 1);
        CHECK(inst.system.couplings[0].k == 0);
        CHECK(inst.system.couplings[0].j == 1);
        CHECK(inst.frequencies.size() == 1);
    }
}

TEST_CASE("random_instance: fixed seed reproduces the frozen instance") {
    RandomInstanceSpec spec;
    spec.n = 5;
    spec.seed = 42;
    spec.detuning = 1e-3;
    const auto inst = random_instance(spec);

    const std::vector<double> energies{0.0, 1.8974143255618308, 2.1249458320010715,
                                       2.9670909466156545, 4.3874202382296108};
    REQUIRE(inst.system.energies.size() == energies.size());
    for (std::size_t k = 0; k < energies.size(); ++k)
        CHECK(inst.system.energies[k] == energies[k]);

    REQUIRE(inst.system.couplings.size() == 4);
    const std::vector<std::pair<int, int>> edges{{0, 4}, {1, 0}, {2, 3}, {3, 0}};
    for (std::size_t e = 0; e < edges.size(); ++e) {
        CHECK(inst.system.couplings[e].k == edges[e].first);
        CHECK(inst.system.couplings[e].j == edges[e].second);
    }
    CHECK(inst.frequencies[0] == 4.3864202382296105);
    CHECK(inst.frequencies[2] == 0.84114511461458308);
    CHECK(inst.goal(0) == cx(-0.0098602829871122892, 0.27624602885769345));
    CHECK(inst.goal(4) == cx(-0.39304116618257262, -0.31311403502126373));
}

TEST_CASE("random_instance: spectra pass the all-pairs degeneracy check in bulk") {
    for (std::uint64_t seed = 0; seed < 10000; ++seed) {
        RandomInstanceSpec spec;
        spec.n = 6;
        spec.seed = seed;
        const auto inst = random_instance(spec);
        const auto report =
            check_nondegenerate(inst.system, 0.999 * spec.min_gap, DegeneracyScope::AllPairs);
        if (!report.valid()) {
            CAPTURE(seed);
            REQUIRE(report.valid());
        }
    }
}

TEST_CASE("random_instance: trees are spanning and goals are normalized") {
    for (std::uint64_t seed = 100; seed < 160; ++seed) {
        RandomInstanceSpec spec;
        spec.n = 2 + static_cast<int>(seed % 7);
        spec.seed = seed;
        const auto inst = random_instance(spec);
        const auto graph = build_graph(inst.system);
        CHECK(graph.is_tree());
        CHECK(std::abs(inst.goal.norm() - 1.0) < 1e-12);
        CHECK(inst.frequencies.size() == static_cast<std::size_t>(spec.n - 1));
    }
}

TEST_CASE("random_tree: labeled trees on three vertices come out uniform") {
    // Three labeled trees exist on 3 vertices (one per center).
    int counts[3] = {0, 0, 0};
    const int draws = 3000;
    for (int i = 0; i < draws; ++i) {
        const auto edges = random_tree(3, 50000 + i);
        int degree[3] = {0, 0, 0};
        for (auto [a, b] : edges) {
            ++degree[a];
            ++degree[b];
        }
        for (int v = 0; v < 3; ++v)
            if (degree[v] == 2) ++counts[v];
    }
    for (int v = 0; v < 3; ++v) {
        CHECK(counts[v] > draws / 3 - 150);
        CHECK(counts[v] < draws / 3 + 150);
    }
}

TEST_CASE("random_instance: impossible gap constraints are reported") {
    RandomInstanceSpec spec;
    spec.n = 8;
    spec.seed = 3;
    spec.min_gap = 2.0;  // 28 transitions cannot be spread that far over [0, 8]
    spec.max_tries = 500;
    CHECK_THROWS_AS(random_instance(spec), ResampleExhaustedError);
}

TEST_CASE("rydberg: silent lasers leave the printed diagonal") {
    RydbergScenario sc;
    sc.blockade = 11.0;
    sc.deltas = {0.3, 0.5, 0.7, 1.1, 1.3};
    const auto h = rydberg_hamiltonian(sc);
    CHECK(h(rydberg_index("00"), rydberg_index("00")) == cx(0.0, 0.0));
    CHECK(h(rydberg_index("0r"), rydberg_index("0r")).real() == doctest::Approx(0.3));
    CHECK(h(rydberg_index("01"), rydberg_index("01")).real() == doctest::Approx(0.3 + 0.7));
    CHECK(h(rydberg_index("r0"), rydberg_index("r0")).real() == doctest::Approx(0.5));
    CHECK(h(rydberg_index("rr"), rydberg_index("rr")).real() == doctest::Approx(0.3 + 1.3 + 11.0));
    CHECK(h(rydberg_index("r1"), rydberg_index("r1")).real() == doctest::Approx(0.3 + 0.5 + 0.7));
    CHECK(h(rydberg_index("10"), rydberg_index("10")).real() == doctest::Approx(0.5 + 1.1));
    CHECK(h(rydberg_index("1r"), rydberg_index("1r")).real() == doctest::Approx(0.3 + 0.5 + 1.1));
    CHECK(h(rydberg_index("11"), rydberg_index("11")).real() ==
          doctest::Approx(0.3 + 0.5 + 0.7 + 1.1));
    // No couplings: the matrix is diagonal.
    Eigen::MatrixXcd off = h;
    off.diagonal().setZero();
    CHECK(off.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("rydberg: the full laser set connects everything but shares drives") {
    RydbergScenario sc = RydbergScenario::bell_defaults();
    sc.active.fill(true);
    for (auto& omega : sc.rabi)
        if (std::abs(omega) == 0.0) omega = sc.rabi[0];
    const auto model = build_rydberg(sc);
    CHECK(model.graph.connected);
    CHECK(model.components.size() == 1);
    // Eight lasers cannot address twelve transitions one-to-one: the four
    // qubit-to-Rydberg lasers each drive two of them.
    CHECK(model.levels.couplings.size() == 12);
}

TEST_CASE("rydberg: the Bell mask splits off a component holding 00 and 11") {
    const auto model = build_rydberg(RydbergScenario::bell_defaults());
    CHECK(model.controllable_components == 2);
    CHECK(model.initial_linked_to_target);
    std::size_t total = 0;
    for (const auto& comp : model.components) total += comp.size();
    CHECK(total == static_cast<std::size_t>(kRydbergLevels));

    std::set<int> transfer;
    for (const auto& comp : model.components)
        if (std::find(comp.begin(), comp.end(), rydberg_index("00")) != comp.end())
            transfer.insert(comp.begin(), comp.end());
    CHECK(transfer == std::set<int>{rydberg_index("00"), rydberg_index("0r"),
                                    rydberg_index("rr"), rydberg_index("r1"),
                                    rydberg_index("11")});
}

TEST_CASE("rydberg: blockade-shifted cross terms vanish from the ideal model") {
    const auto sc = RydbergScenario::bell_defaults();
    const auto terms = rydberg_cross_terms(sc);
    REQUIRE(terms.size() == 6);  // one per qubit laser, two per bridge laser
    for (const auto& t : terms)
        CHECK(std::abs(std::abs(t.frequency) - sc.blockade) < 1e-9);
}

TEST_CASE("rydberg: finite blockade converges to the ideal model as U grows") {
    const auto base = RydbergScenario::bell_defaults();
    const double ideal = rydberg_transfer_infidelity(base, kBellDuration);
    CHECK(ideal == doctest::Approx(ideal));
    double previous = 1.0;
    for (double scale : {1.0, 10.0, 100.0}) {
        RydbergScenario sc = base;
        sc.blockade *= scale;
        sc.deltas[4] = -sc.blockade;
        sc.finite_blockade = true;
        const double inf = rydberg_transfer_infidelity(sc, kBellDuration, 1e-11);
        const double gap = std::abs(inf - ideal);
        CHECK(gap < previous);
        previous = gap;
    }
    CHECK(previous < 1e-5);
}

TEST_CASE("rydberg: re-optimized protocol closes the transfer, blockade limits it") {
    const auto report = rydberg_bell_transfer(RydbergScenario::bell_defaults(), kBellDuration,
                                              /*reoptimize=*/true);
    // The default constant set leaves most of the population behind; the
    // tuned protocol is the one that closes the transfer.
    CHECK(report.infidelity > 0.1);
    REQUIRE(report.reoptimized_infidelity.has_value());
    CHECK(*report.reoptimized_infidelity < 1e-6);

    RydbergScenario tuned = report.scenario;
    tuned.rabi = report.reoptimized_rabi;
    tuned.deltas = report.reoptimized_deltas;
    tuned.deltas[4] = -tuned.blockade;
    tuned.finite_blockade = true;
    const double finite =
        rydberg_transfer_infidelity(tuned, report.reoptimized_duration, 1e-11);
    CHECK(finite > 5e-4);
    CHECK(finite < 1e-2);
}

TEST_CASE("sweep: serial and parallel runs emit identical tables") {
    SweepConfig config;
    config.dimensions = {2, 3};
    config.detunings = {1e-2, 1e-6};
    config.goals_per_cell = 2;
    config.master_seed = 7;
    config.simplex.max_evaluations = 6000;
    config.double_check_tol = 1e-9;

    const auto serial = run_sweep_serial(config);
    config.threads = 3;
    const auto parallel = run_sweep(config);
    CHECK(sweep_csv(serial) == sweep_csv(parallel));

    const auto again = run_sweep(config);
    CHECK(sweep_csv(parallel) == sweep_csv(again));

    REQUIRE(serial.rows.size() == 8);
    for (std::size_t i = 1; i < serial.rows.size(); ++i) {
        const auto& a = serial.rows[i - 1];
        const auto& b = serial.rows[i];
        const bool ordered = a.n < b.n || (a.n == b.n && a.delta < b.delta) ||
                             (a.n == b.n && a.delta == b.delta && a.seed < b.seed);
        CHECK(ordered);
    }
    for (const auto& row : serial.rows) CHECK(row.error.empty());

    // The double check can only confirm, never rescue, an optimization.
    for (const auto& cell : serial.lambdas) CHECK(cell.lambda_exact <= cell.lambda_rwa);
    for (const auto& row : serial.rows)
        if (row.exact_success) CHECK(row.rwa_success);
}

TEST_CASE("sweep: summary JSON lists one entry per cell") {
    SweepConfig config;
    config.dimensions = {2};
    config.detunings = {1e-6};
    config.goals_per_cell = 2;
    config.master_seed = 11;
    config.simplex.max_evaluations = 4000;
    config.double_check_tol = 1e-9;
    const auto result = run_sweep_serial(config);
    const auto json_text = lambda_summary_json(config, result);
    CHECK(json_text.find("\"n\": 2") != std::string::npos);
    CHECK(json_text.find("\"goals\": 2") != std::string::npos);
    const auto csv = sweep_csv(result);
    CHECK(csv.rfind("n,delta,seed,distance,rwa_infidelity,exact_infidelity,", 0) == 0);
}
