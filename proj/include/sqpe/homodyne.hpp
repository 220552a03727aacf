#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "sqpe/probe.hpp"
#include "sqpe/rng.hpp"

namespace sqpe {

/// Quadrature samples drawn at one fixed relative phase.
struct HomodyneBatch {
    std::vector<double> samples;
    double measured_phase = 0.0;
    SqueezedThermalProbe probe;
};

/// Draws m independent zero-mean Gaussian samples with variance
/// quadrature_variance(probe, phi) and advances the stream by 2m counters.
HomodyneBatch sample_homodyne(const SqueezedThermalProbe& probe, double phi, std::size_t m,
                              RandomStream& stream);

// Bulk standard-normal fill scaled by sigma; out[i] is the draw at counter
// base_counter + 2i. The OpenMP variant partitions by counter and is
// bit-identical to the serial reference at any thread count.
void fill_gaussian(std::uint64_t seed, std::uint64_t base_counter, double sigma,
                   std::span<double> out);
void fill_gaussian_serial(std::uint64_t seed, std::uint64_t base_counter, double sigma,
                          std::span<double> out);

/// One sample per line, shortest round-trip decimal text.
void write_samples(const HomodyneBatch& batch, const std::filesystem::path& path);

}  // namespace sqpe
