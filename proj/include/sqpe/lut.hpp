#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "sqpe/grid.hpp"
#include "sqpe/posterior.hpp"
#include "sqpe/probe.hpp"

namespace sqpe {

/// Mid-rise uniform quantizer plus the fixed-point scale applied to the
/// tabulated log-likelihoods. min_capacity is the smallest sample count the
/// accumulators must be provably safe for; build_table rejects quantizers
/// whose entries are too large to guarantee it.
struct QuantizerSpec {
    double x_min = -24.0;
    double x_max = 24.0;
    std::size_t bins = 4096;
    std::int64_t scale = 1 << 20;  // power of two
    std::uint64_t min_capacity = 10'000'000;
};

/// Clip range +-6 sqrt(max sigma^2) around zero, default bins and scale.
QuantizerSpec default_quantizer(const SqueezedThermalProbe& probe, std::size_t bins = 4096,
                                int scale_bits = 20);

/// Precomputed integer table entries[b][j] = round(scale * log_likelihood
/// (center(b), phi_j, probe)), stored row-major by bin.
class LikelihoodTable {
public:
    LikelihoodTable(const SqueezedThermalProbe& probe, PhaseGrid grid, const QuantizerSpec& spec);

    const SqueezedThermalProbe& probe() const noexcept { return probe_; }
    const PhaseGrid& grid() const noexcept { return grid_; }
    const QuantizerSpec& quantizer() const noexcept { return spec_; }
    std::size_t grid_points() const noexcept { return grid_.size(); }
    std::size_t bins() const noexcept { return spec_.bins; }

    std::int64_t max_abs_entry() const noexcept { return max_abs_entry_; }
    /// Largest sample count for which accumulator overflow is impossible:
    /// max|entry| * capacity() <= INT64_MAX.
    std::uint64_t capacity() const noexcept { return capacity_; }

    double bin_width() const noexcept { return (spec_.x_max - spec_.x_min) / double(spec_.bins); }
    double bin_center(std::size_t b) const noexcept {
        return spec_.x_min + (double(b) + 0.5) * bin_width();
    }
    /// Clip-and-quantize; x outside [x_min, x_max] lands in the edge bin
    /// with `clipped` set.
    std::size_t bin_of(double x, bool& clipped) const noexcept;

    std::span<const std::int64_t> row(std::size_t b) const noexcept {
        return {entries_.data() + b * grid_.size(), grid_.size()};
    }
    std::span<const std::int64_t> entries() const noexcept { return entries_; }

    /// Text header (grid points, bins, scale, clip range, probe parameters)
    /// followed by the raw little-endian int64 entries, row-major by bin.
    void save(const std::filesystem::path& path) const;
    static LikelihoodTable load(const std::filesystem::path& path);

private:
    LikelihoodTable() = default;
    void finish_build();

    SqueezedThermalProbe probe_;
    PhaseGrid grid_{2};
    QuantizerSpec spec_;
    std::vector<std::int64_t> entries_;
    std::int64_t max_abs_entry_ = 0;
    std::uint64_t capacity_ = 0;
};

LikelihoodTable build_table(const SqueezedThermalProbe& probe, const PhaseGrid& grid,
                            const QuantizerSpec& spec);

/// Streaming integer accumulation: one wide accumulator per grid phase,
/// O(grid points) integer additions per sample, no data-dependent branching
/// beyond clipping. Integer addition commutes exactly, so batch order and
/// thread count never change the result.
struct StreamState {
    explicit StreamState(std::size_t grid_points)
        : accumulators(grid_points, 0) {}

    std::vector<std::int64_t> accumulators;
    std::size_t count = 0;
    bool saturation_flag = false;

    void update(const LikelihoodTable& table, double x);
    void update_batch(const LikelihoodTable& table, std::span<const double> xs);
    void update_batch_serial(const LikelihoodTable& table, std::span<const double> xs);
};

/// Converts the integer accumulators back to a normalized posterior at the
/// declared scale. Throws std::invalid_argument for zero samples.
Posterior finalize(const StreamState& state, const LikelihoodTable& table);

/// The exact-float streaming counterpart: accumulators[j] += c_j - x^2 d_j
/// per sample, with c_j and d_j precomputed from the probe. Serves as the
/// reference path the LUT engine is benchmarked against.
class ExactStream {
public:
    ExactStream(const SqueezedThermalProbe& probe, const PhaseGrid& grid);

    std::size_t count() const noexcept { return count_; }
    std::span<const double> accumulators() const noexcept { return accumulators_; }

    void update(double x);
    void update_batch(std::span<const double> xs);
    void update_batch_serial(std::span<const double> xs);

    Posterior finalize() const;

private:
    PhaseGrid grid_;
    std::vector<double> offset_;       // -(1/2) ln(2 pi sigma_j^2)
    std::vector<double> inv_two_var_;  // 1 / (2 sigma_j^2)
    std::vector<double> accumulators_;
    std::size_t count_ = 0;
};

/// Paired wall-clock measurement of the LUT and exact-float streaming paths
/// on identical seeded data, plus the accuracy deltas between them.
struct BenchReport {
    std::size_t m = 0;
    std::size_t grid_points = 0;
    std::size_t bins = 0;
    std::int64_t scale = 0;
    double x_min = 0.0, x_max = 0.0;
    double probe_r = 0.0, probe_n_th = 0.0;
    double lut_updates_per_sec = 0.0;
    double lut_serial_updates_per_sec = 0.0;
    double exact_updates_per_sec = 0.0;
    double exact_serial_updates_per_sec = 0.0;
    double lut_ns_per_sample = 0.0;
    double exact_ns_per_sample = 0.0;
    std::size_t map_index_distance = 0;  // |LUT MAP index - exact MAP index|
    double variance_ratio = 0.0;         // LUT variance / exact variance
    bool rerun_bit_identical = false;
    int omp_threads = 1;
    unsigned hardware_concurrency = 0;
    std::string compiler;
};

/// Requires m >= 1e5 so the timing is meaningful. Samples are drawn at the
/// optimal phase of the table's probe.
BenchReport bench_throughput(const LikelihoodTable& table, std::size_t m, std::uint64_t seed);

std::string to_json(const BenchReport& report);

}  // namespace sqpe
