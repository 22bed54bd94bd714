// Serial reference vs OpenMP sweep on a small grid: verifies the tables are
// identical and prints the timing ratio.

#include <cstdio>
#include <cstdlib>

#include "rwaqoc/sweep.hpp"

using namespace rwaqoc;

int main(int argc, char** argv) {
    SweepConfig config;
    config.dimensions = {2, 3, 4};
    config.detunings = {1e-3, 1e-5, 1e-7};
    config.goals_per_cell = argc > 1 ? std::atoi(argv[1]) : 4;
    config.master_seed = 1234;
    config.simplex.max_evaluations = 20000;

    const SweepResult serial = run_sweep_serial(config);
    const SweepResult parallel = run_sweep(config);

    if (sweep_csv(serial) != sweep_csv(parallel)) {
        std::fprintf(stderr, "serial and parallel sweeps disagree\n");
        return 1;
    }

    std::printf("cells        : %zu\n", serial.rows.size());
    std::printf("serial       : %.3f s\n", serial.wall_seconds);
    std::printf("parallel     : %.3f s\n", parallel.wall_seconds);
    std::printf("speedup      : %.2fx\n", serial.wall_seconds / parallel.wall_seconds);
    std::printf("tables match : yes\n");
    return 0;
}
