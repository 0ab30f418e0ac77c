// Wall-clock comparison of the serial and OpenMP experiment drivers.
//
//   bench_experiment [n] [trials] [max_workers]

#include "polya/experiment.hpp"

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <memory>

using namespace polya;

namespace {

template <class F>
double seconds(F &&f)
{
    const auto start = std::chrono::steady_clock::now();
    f();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

} // namespace

int main(int argc, char **argv)
{
    const std::size_t n = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 1000;
    const std::size_t trials = argc > 2 ? std::strtoull(argv[2], nullptr, 10) : 4000;
    const std::size_t max_workers =
        argc > 3 ? std::strtoull(argv[3], nullptr, 10) : static_cast<std::size_t>(omp_get_max_threads());

    std::unique_ptr<PolyaSampler> sampler;
    const double setup = seconds([&] { sampler = std::make_unique<PolyaSampler>(n); });
    std::printf("n=%zu trials=%zu table=%.3fs cores=%d\n", n, trials, setup, omp_get_num_procs());

    const RngStream rng(default_seed, 0);
    ExperimentStats reference;
    const double serial = seconds([&] { reference = run_experiment_serial(*sampler, n, trials, rng); });
    std::printf("%-10s %8.3fs  %10.1f trials/s\n", "serial", serial, trials / serial);

    for (std::size_t w = 1; w <= max_workers; w *= 2) {
        ExperimentStats stats;
        const double t = seconds([&] { stats = run_experiment(*sampler, n, trials, rng, w); });
        std::printf("omp x%-5zu %8.3fs  %10.1f trials/s  speedup %.2f  %s\n", w, t, trials / t, serial / t,
                    stats == reference ? "identical" : "MISMATCH");
        if (!(stats == reference)) {
            return 1;
        }
    }
    return 0;
}
