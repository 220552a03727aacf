#include "sqpe/homodyne.hpp"

#include <cmath>
#include <cstdint>
#include <string>

#include "sqpe/io.hpp"

namespace sqpe {

void fill_gaussian_serial(std::uint64_t seed, std::uint64_t base_counter, double sigma,
                          std::span<double> out) {
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = sigma * gaussian_at(seed, base_counter + 2 * i);
}

void fill_gaussian(std::uint64_t seed, std::uint64_t base_counter, double sigma,
                   std::span<double> out) {
    const std::int64_t n = static_cast<std::int64_t>(out.size());
#pragma omp parallel for schedule(static) if (n >= 4096)
    for (std::int64_t i = 0; i < n; ++i)
        out[static_cast<std::size_t>(i)] =
            sigma * gaussian_at(seed, base_counter + 2 * static_cast<std::uint64_t>(i));
}

HomodyneBatch sample_homodyne(const SqueezedThermalProbe& probe, double phi, std::size_t m,
                              RandomStream& stream) {
    HomodyneBatch batch;
    batch.measured_phase = phi;
    batch.probe = probe;
    batch.samples.resize(m);
    const double sigma = std::sqrt(quadrature_variance(probe, phi));
    fill_gaussian(stream.seed, stream.position, sigma, batch.samples);
    stream.position += 2 * m;
    return batch;
}

void write_samples(const HomodyneBatch& batch, const std::filesystem::path& path) {
    std::string text;
    text.reserve(batch.samples.size() * 20);
    for (double x : batch.samples) {
        text += format_double(x);
        text += '\n';
    }
    atomic_write(path, text);
}

}  // namespace sqpe
