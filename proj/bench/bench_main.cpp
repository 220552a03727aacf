// Kernel benchmark: OpenMP variants against their serial references, and the
// fixed-point LUT streaming path against the exact-float path.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "sqpe/homodyne.hpp"
#include "sqpe/lut.hpp"
#include "sqpe/probe.hpp"
#include "sqpe/sweep.hpp"

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void print_row(const char* name, double serial_s, double parallel_s, std::size_t items,
               bool identical) {
    std::printf("%-24s %10.4fs %10.4fs %8.2fx  %10.1f M/s  %s\n", name, serial_s, parallel_s,
                serial_s / parallel_s, items / parallel_s / 1e6,
                identical ? "bit-identical" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
    const std::size_t m = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 2'000'000;
    const auto probe = sqpe::probe_from_db(5.69, 11.83);
    const sqpe::PhaseGrid grid(2048);
    const double phi = sqpe::optimal_phase(probe);
    const double sigma = std::sqrt(sqpe::quadrature_variance(probe, phi));

#ifdef _OPENMP
    std::printf("threads: %d, samples: %zu, grid: %zu\n\n", omp_get_max_threads(), m,
                grid.size());
#else
    std::printf("threads: 1 (no OpenMP), samples: %zu, grid: %zu\n\n", m, grid.size());
#endif
    std::printf("%-24s %11s %11s %9s %14s\n", "kernel", "serial", "parallel", "speedup",
                "throughput");

    // Gaussian sampling.
    std::vector<double> a(m), b(m);
    auto t0 = std::chrono::steady_clock::now();
    sqpe::fill_gaussian_serial(42, 0, sigma, a);
    const double fill_serial = seconds_since(t0);
    t0 = std::chrono::steady_clock::now();
    sqpe::fill_gaussian(42, 0, sigma, b);
    const double fill_parallel = seconds_since(t0);
    print_row("gaussian fill", fill_serial, fill_parallel, m, a == b);

    // Exact-float streaming accumulation.
    sqpe::ExactStream exact_serial(probe, grid), exact_parallel(probe, grid);
    t0 = std::chrono::steady_clock::now();
    exact_serial.update_batch_serial(a);
    const double exact_s = seconds_since(t0);
    t0 = std::chrono::steady_clock::now();
    exact_parallel.update_batch(a);
    const double exact_p = seconds_since(t0);
    const bool exact_same =
        std::vector<double>(exact_serial.accumulators().begin(),
                            exact_serial.accumulators().end()) ==
        std::vector<double>(exact_parallel.accumulators().begin(),
                            exact_parallel.accumulators().end());
    print_row("exact-float stream", exact_s, exact_p, m, exact_same);

    // Fixed-point LUT accumulation.
    const auto table = sqpe::build_table(probe, grid, sqpe::default_quantizer(probe));
    sqpe::StreamState lut_serial(grid.size()), lut_parallel(grid.size());
    t0 = std::chrono::steady_clock::now();
    lut_serial.update_batch_serial(table, a);
    const double lut_s = seconds_since(t0);
    t0 = std::chrono::steady_clock::now();
    lut_parallel.update_batch(table, a);
    const double lut_p = seconds_since(t0);
    print_row("lut stream", lut_s, lut_p, m, lut_serial.accumulators == lut_parallel.accumulators);

    std::printf("\nlut vs exact (parallel): %.2fx per-sample\n", exact_p / lut_p);
    std::printf("full report: sqpe bench-lut --m %zu\n", m);
    return 0;
}
