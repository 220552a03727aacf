#include "sqpe/lut.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <thread>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "json.hpp"
#include "sqpe/homodyne.hpp"
#include "sqpe/io.hpp"

namespace sqpe {

namespace {

constexpr std::int64_t kAccumulatorMax = std::numeric_limits<std::int64_t>::max();

void check_quantizer(const QuantizerSpec& spec) {
    if (!(spec.x_min < spec.x_max) || !std::isfinite(spec.x_min) || !std::isfinite(spec.x_max))
        throw std::invalid_argument("build_table: need finite x_min < x_max");
    if (spec.bins < 1) throw std::invalid_argument("build_table: need at least one bin");
    if (spec.scale < 1) throw std::invalid_argument("build_table: scale must be >= 1");
    if (!std::has_single_bit(static_cast<std::uint64_t>(spec.scale)))
        throw std::invalid_argument("build_table: scale must be a power of two");
}

double elapsed_seconds(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

QuantizerSpec default_quantizer(const SqueezedThermalProbe& probe, std::size_t bins,
                                int scale_bits) {
    QuantizerSpec spec;
    const double sigma_max = std::sqrt(quadrature_variance(probe, std::numbers::pi / 2.0));
    spec.x_max = 6.0 * sigma_max;
    spec.x_min = -spec.x_max;
    spec.bins = bins;
    spec.scale = std::int64_t{1} << scale_bits;
    return spec;
}

LikelihoodTable::LikelihoodTable(const SqueezedThermalProbe& probe, PhaseGrid grid,
                                 const QuantizerSpec& spec)
    : probe_(probe), grid_(std::move(grid)), spec_(spec) {
    check_quantizer(spec_);
    const std::size_t g = grid_.size();
    entries_.resize(spec_.bins * g);

    const double scale = static_cast<double>(spec_.scale);
    const std::int64_t b_count = static_cast<std::int64_t>(spec_.bins);
    bool out_of_range = false;
#pragma omp parallel for schedule(static) reduction(|| : out_of_range)
    for (std::int64_t b = 0; b < b_count; ++b) {
        const double xc = bin_center(static_cast<std::size_t>(b));
        std::int64_t* row = entries_.data() + static_cast<std::size_t>(b) * g;
        for (std::size_t j = 0; j < g; ++j) {
            const double e = scale * log_likelihood(xc, grid_[j], probe_);
            if (!(std::abs(e) < 9.0e18)) {
                out_of_range = true;
                row[j] = 0;
            } else {
                row[j] = std::llround(e);
            }
        }
    }
    if (out_of_range)
        throw std::invalid_argument("build_table: scale too large, an entry overflows int64");
    finish_build();
}

void LikelihoodTable::finish_build() {
    std::int64_t max_abs = 0;
    for (std::int64_t e : entries_) max_abs = std::max(max_abs, std::abs(e));
    max_abs_entry_ = max_abs;
    capacity_ = max_abs == 0 ? std::numeric_limits<std::uint64_t>::max()
                             : static_cast<std::uint64_t>(kAccumulatorMax / max_abs);
    if (capacity_ < spec_.min_capacity)
        throw std::invalid_argument(
            "build_table: scale too large for the accumulator width (capacity " +
            format_u64(capacity_) + " samples < required " + format_u64(spec_.min_capacity) + ")");
}

std::size_t LikelihoodTable::bin_of(double x, bool& clipped) const noexcept {
    clipped = false;
    if (x < spec_.x_min) {
        clipped = true;
        return 0;
    }
    if (x > spec_.x_max) {
        clipped = true;
        return spec_.bins - 1;
    }
    const double t = (x - spec_.x_min) / (spec_.x_max - spec_.x_min) * double(spec_.bins);
    const auto k = static_cast<std::size_t>(t);
    return k >= spec_.bins ? spec_.bins - 1 : k;
}

LikelihoodTable build_table(const SqueezedThermalProbe& probe, const PhaseGrid& grid,
                            const QuantizerSpec& spec) {
    return LikelihoodTable(probe, grid, spec);
}

void LikelihoodTable::save(const std::filesystem::path& path) const {
    static_assert(std::endian::native == std::endian::little,
                  "table dump format is little-endian");
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("LikelihoodTable::save: cannot open " + path.string());
    out << "sqpe-lut 1 " << grid_.size() << ' ' << spec_.bins << ' ' << spec_.scale << ' '
        << format_double(spec_.x_min) << ' ' << format_double(spec_.x_max) << ' '
        << format_u64(spec_.min_capacity) << ' ' << format_double(probe_.r) << ' '
        << format_double(probe_.n_th) << '\n';
    out.write(reinterpret_cast<const char*>(entries_.data()),
              static_cast<std::streamsize>(entries_.size() * sizeof(std::int64_t)));
    if (!out) throw std::runtime_error("LikelihoodTable::save: short write to " + path.string());
}

LikelihoodTable LikelihoodTable::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("LikelihoodTable::load: cannot open " + path.string());
    std::string header;
    std::getline(in, header);
    std::istringstream hs(header);
    std::string magic;
    int version = 0;
    std::size_t grid_points = 0;
    LikelihoodTable table;
    hs >> magic >> version >> grid_points >> table.spec_.bins >> table.spec_.scale >>
        table.spec_.x_min >> table.spec_.x_max >> table.spec_.min_capacity >> table.probe_.r >>
        table.probe_.n_th;
    if (!hs || magic != "sqpe-lut" || version != 1)
        throw std::runtime_error("LikelihoodTable::load: bad header in " + path.string());
    table.grid_ = PhaseGrid(grid_points);
    table.entries_.resize(table.spec_.bins * grid_points);
    in.read(reinterpret_cast<char*>(table.entries_.data()),
            static_cast<std::streamsize>(table.entries_.size() * sizeof(std::int64_t)));
    if (!in || in.gcount() !=
                   static_cast<std::streamsize>(table.entries_.size() * sizeof(std::int64_t)))
        throw std::runtime_error("LikelihoodTable::load: truncated entries in " + path.string());
    table.finish_build();
    return table;
}

void StreamState::update(const LikelihoodTable& table, double x) {
    if (accumulators.size() != table.grid_points())
        throw std::invalid_argument("StreamState::update: state/table grid mismatch");
    if (count + 1 > table.capacity())
        throw std::runtime_error("StreamState::update: accumulator capacity exceeded");
    bool clipped = false;
    const auto row = table.row(table.bin_of(x, clipped));
    saturation_flag = saturation_flag || clipped;
    for (std::size_t j = 0; j < accumulators.size(); ++j) accumulators[j] += row[j];
    ++count;
}

void StreamState::update_batch_serial(const LikelihoodTable& table, std::span<const double> xs) {
    if (accumulators.size() != table.grid_points())
        throw std::invalid_argument("StreamState::update_batch: state/table grid mismatch");
    if (count + xs.size() > table.capacity())
        throw std::runtime_error("StreamState::update_batch: accumulator capacity exceeded");
    const std::size_t g = accumulators.size();
    for (double x : xs) {
        bool clipped = false;
        const auto row = table.row(table.bin_of(x, clipped));
        saturation_flag = saturation_flag || clipped;
        for (std::size_t j = 0; j < g; ++j) accumulators[j] += row[j];
    }
    count += xs.size();
}

void StreamState::update_batch(const LikelihoodTable& table, std::span<const double> xs) {
    if (xs.size() < 1024) {
        update_batch_serial(table, xs);
        return;
    }
    if (accumulators.size() != table.grid_points())
        throw std::invalid_argument("StreamState::update_batch: state/table grid mismatch");
    if (count + xs.size() > table.capacity())
        throw std::runtime_error("StreamState::update_batch: accumulator capacity exceeded");

    const std::size_t g = accumulators.size();
    const std::int64_t n = static_cast<std::int64_t>(xs.size());
    bool clipped_any = false;
    // Integer addition is exactly associative, so folding per-thread partial
    // sums reproduces the serial result bit for bit.
#pragma omp parallel reduction(|| : clipped_any)
    {
        std::vector<std::int64_t> local(g, 0);
#pragma omp for schedule(static) nowait
        for (std::int64_t i = 0; i < n; ++i) {
            bool clipped = false;
            const auto row = table.row(table.bin_of(xs[static_cast<std::size_t>(i)], clipped));
            clipped_any = clipped_any || clipped;
            for (std::size_t j = 0; j < g; ++j) local[j] += row[j];
        }
#pragma omp critical
        {
            for (std::size_t j = 0; j < g; ++j) accumulators[j] += local[j];
        }
    }
    saturation_flag = saturation_flag || clipped_any;
    count += xs.size();
}

Posterior finalize(const StreamState& state, const LikelihoodTable& table) {
    if (state.count == 0) throw std::invalid_argument("finalize: no samples accumulated");
    if (state.accumulators.size() != table.grid_points())
        throw std::invalid_argument("finalize: state/table grid mismatch");
    std::vector<double> log_weights(state.accumulators.size());
    const double inv_scale = 1.0 / static_cast<double>(table.quantizer().scale);
    for (std::size_t j = 0; j < log_weights.size(); ++j)
        log_weights[j] = static_cast<double>(state.accumulators[j]) * inv_scale;
    return posterior_from_log_weights(table.grid(), std::move(log_weights));
}

ExactStream::ExactStream(const SqueezedThermalProbe& probe, const PhaseGrid& grid)
    : grid_(grid),
      offset_(grid.size()),
      inv_two_var_(grid.size()),
      accumulators_(grid.size(), 0.0) {
    for (std::size_t j = 0; j < grid.size(); ++j) {
        const double v = quadrature_variance(probe, grid[j]);
        offset_[j] = -0.5 * std::log(2.0 * std::numbers::pi * v);
        inv_two_var_[j] = 0.5 / v;
    }
}

void ExactStream::update(double x) {
    const double t = x * x;
    for (std::size_t j = 0; j < accumulators_.size(); ++j)
        accumulators_[j] += offset_[j] - t * inv_two_var_[j];
    ++count_;
}

void ExactStream::update_batch_serial(std::span<const double> xs) {
    // Per grid point, samples are added in batch order; the parallel variant
    // partitions by grid point and keeps the same inner order, so both paths
    // agree bit for bit.
    const std::size_t g = accumulators_.size();
    for (std::size_t j = 0; j < g; ++j) {
        double acc = accumulators_[j];
        const double off = offset_[j];
        const double d = inv_two_var_[j];
        for (double x : xs) acc += off - x * x * d;
        accumulators_[j] = acc;
    }
    count_ += xs.size();
}

void ExactStream::update_batch(std::span<const double> xs) {
    const std::int64_t g = static_cast<std::int64_t>(accumulators_.size());
#pragma omp parallel for schedule(static) if (xs.size() >= 1024)
    for (std::int64_t j = 0; j < g; ++j) {
        const auto jj = static_cast<std::size_t>(j);
        double acc = accumulators_[jj];
        const double off = offset_[jj];
        const double d = inv_two_var_[jj];
        for (double x : xs) acc += off - x * x * d;
        accumulators_[jj] = acc;
    }
    count_ += xs.size();
}

Posterior ExactStream::finalize() const {
    if (count_ == 0) throw std::invalid_argument("ExactStream::finalize: no samples accumulated");
    return posterior_from_log_weights(grid_, accumulators_);
}

BenchReport bench_throughput(const LikelihoodTable& table, std::size_t m, std::uint64_t seed) {
    if (m < 100'000)
        throw std::invalid_argument("bench_throughput: need at least 1e5 samples");

    const SqueezedThermalProbe probe = table.probe();
    const double phi = optimal_phase(probe);
    std::vector<double> xs(m);
    fill_gaussian(seed, 0, std::sqrt(quadrature_variance(probe, phi)), xs);

    BenchReport report;
    report.m = m;
    report.grid_points = table.grid_points();
    report.bins = table.bins();
    report.scale = table.quantizer().scale;
    report.x_min = table.quantizer().x_min;
    report.x_max = table.quantizer().x_max;
    report.probe_r = probe.r;
    report.probe_n_th = probe.n_th;

    ExactStream exact_omp(probe, table.grid());
    auto t0 = std::chrono::steady_clock::now();
    exact_omp.update_batch(xs);
    const double exact_secs = elapsed_seconds(t0);

    ExactStream exact_serial(probe, table.grid());
    t0 = std::chrono::steady_clock::now();
    exact_serial.update_batch_serial(xs);
    const double exact_serial_secs = elapsed_seconds(t0);

    StreamState lut_omp(table.grid_points());
    t0 = std::chrono::steady_clock::now();
    lut_omp.update_batch(table, xs);
    const double lut_secs = elapsed_seconds(t0);

    StreamState lut_serial(table.grid_points());
    t0 = std::chrono::steady_clock::now();
    lut_serial.update_batch_serial(table, xs);
    const double lut_serial_secs = elapsed_seconds(t0);

    StreamState lut_rerun(table.grid_points());
    lut_rerun.update_batch(table, xs);
    report.rerun_bit_identical = lut_rerun.accumulators == lut_omp.accumulators;

    const Posterior exact_post = exact_serial.finalize();
    const Posterior lut_post = finalize(lut_serial, table);
    report.map_index_distance = exact_post.map_index > lut_post.map_index
                                    ? exact_post.map_index - lut_post.map_index
                                    : lut_post.map_index - exact_post.map_index;
    report.variance_ratio = lut_post.variance / exact_post.variance;

    const double md = static_cast<double>(m);
    report.exact_updates_per_sec = md / exact_secs;
    report.exact_serial_updates_per_sec = md / exact_serial_secs;
    report.lut_updates_per_sec = md / lut_secs;
    report.lut_serial_updates_per_sec = md / lut_serial_secs;
    report.exact_ns_per_sample = 1e9 * exact_secs / md;
    report.lut_ns_per_sample = 1e9 * lut_secs / md;

#ifdef _OPENMP
    report.omp_threads = omp_get_max_threads();
#else
    report.omp_threads = 1;
#endif
    report.hardware_concurrency = std::thread::hardware_concurrency();
    report.compiler = __VERSION__;
    return report;
}

std::string to_json(const BenchReport& r) {
    nlohmann::json j;
    j["m"] = r.m;
    j["grid_points"] = r.grid_points;
    j["bins"] = r.bins;
    j["scale"] = r.scale;
    j["x_min"] = r.x_min;
    j["x_max"] = r.x_max;
    j["probe"] = {{"r", r.probe_r}, {"n_th", r.probe_n_th}};
    j["lut"] = {{"updates_per_sec", r.lut_updates_per_sec},
                {"serial_updates_per_sec", r.lut_serial_updates_per_sec},
                {"ns_per_sample", r.lut_ns_per_sample}};
    j["exact"] = {{"updates_per_sec", r.exact_updates_per_sec},
                  {"serial_updates_per_sec", r.exact_serial_updates_per_sec},
                  {"ns_per_sample", r.exact_ns_per_sample}};
    j["agreement"] = {{"map_index_distance", r.map_index_distance},
                      {"variance_ratio", r.variance_ratio},
                      {"rerun_bit_identical", r.rerun_bit_identical}};
    j["machine"] = {{"omp_threads", r.omp_threads},
                    {"hardware_concurrency", r.hardware_concurrency},
                    {"compiler", r.compiler}};
    return j.dump(2) + "\n";
}

}  // namespace sqpe
