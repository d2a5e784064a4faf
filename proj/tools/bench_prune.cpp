// Benchmark: OpenMP redundancy pruning vs the serial reference, on usage
// systems of growing size. Prints one line per case with both timings and
// checks the outputs match.
#include <chrono>
#include <cstdio>
#include <random>

#include "lcqmac/protocols.hpp"

using namespace lcqmac;

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

int main() {
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<size_t> ndist(0, 3);
    std::printf("%-28s %8s %10s %10s %8s\n", "case", "rows", "serial(s)", "openmp(s)", "match");
    for (int trial = 0; trial < 6; ++trial) {
        NVector n{ndist(rng), ndist(rng), ndist(rng), ndist(rng),
                  ndist(rng), ndist(rng), ndist(rng), ndist(rng)};
        HPolyhedron sys = usage_system(n);
        // Partially eliminate to fatten the row count before pruning.
        std::set<size_t> drop;
        for (size_t j = 3; j < 3 + 12; ++j) drop.insert(j);
        HPolyhedron mid = fm_eliminate(sys, drop);

        auto t0 = std::chrono::steady_clock::now();
        HPolyhedron serial = remove_redundant_serial(mid);
        double t_serial = seconds_since(t0);

        auto t1 = std::chrono::steady_clock::now();
        HPolyhedron parallel = remove_redundant(mid);
        double t_parallel = seconds_since(t1);

        bool match = serial.A == parallel.A && serial.b == parallel.b;
        std::printf("usage-system trial %-9d %8zu %10.4f %10.4f %8s\n", trial, mid.row_count(),
                    t_serial, t_parallel, match ? "yes" : "NO");
        if (!match) return 1;
    }
    return 0;
}
