#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace sqpe {

// Counter-based pseudorandom primitives. The generator is the splitmix64
// sequence: output k of a stream with seed s is mix_bits(s + (k+1)*GOLDEN).
// Random access by counter makes bulk sampling order-free, so parallel and
// serial fills produce identical bytes.

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

[[nodiscard]] constexpr std::uint64_t mix_bits(std::uint64_t z) noexcept {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ULL;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return z;
}

[[nodiscard]] constexpr std::uint64_t uniform_bits(std::uint64_t seed, std::uint64_t counter) noexcept {
    return mix_bits(seed + (counter + 1) * kGolden);
}

// Standard-normal draw addressed by counter. Draw k of a stream consumes
// counters 2k and 2k+1 through a Box-Muller transform:
//   u1 = ((bits(2k)   >> 11) + 1) * 2^-53   in (0, 1]
//   u2 = ( bits(2k+1) >> 11     ) * 2^-53   in [0, 1)
//   z  = sqrt(-2 ln u1) * cos(2 pi u2)
[[nodiscard]] inline double gaussian_at(std::uint64_t seed, std::uint64_t counter) noexcept {
    const double u1 = static_cast<double>((uniform_bits(seed, counter) >> 11) + 1) * 0x1.0p-53;
    const double u2 = static_cast<double>(uniform_bits(seed, counter + 1) >> 11) * 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

/// Single-owner stream of Gaussian draws. Identical (seed, position) always
/// reproduces identical samples, independent of process, thread count or
/// call batching.
struct RandomStream {
    std::uint64_t seed = 0;
    std::uint64_t position = 0;

    double next_gaussian() noexcept {
        const double z = gaussian_at(seed, position);
        position += 2;
        return z;
    }
};

// Seed derivation. Sweep indices (phase, budget, mode) fold into the master
// seed one salt at a time; repetition k of a configuration then uses
// config_seed ^ k.
[[nodiscard]] constexpr std::uint64_t fold_seed(std::uint64_t base, std::uint64_t salt) noexcept {
    return mix_bits(base + (salt + 1) * kGolden);
}

[[nodiscard]] constexpr std::uint64_t repetition_seed(std::uint64_t config_seed,
                                                      std::uint64_t repetition) noexcept {
    return config_seed ^ repetition;
}

}  // namespace sqpe
