#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include "sqpe/grid.hpp"
#include "sqpe/homodyne.hpp"
#include "sqpe/probe.hpp"

namespace sqpe {

/// Discrete posterior over the phase grid.
struct Posterior {
    PhaseGrid grid;
    std::vector<double> log_weights;    // accumulated unnormalized log-likelihood
    std::vector<double> probabilities;  // normalized masses, sum to 1
    std::size_t map_index = 0;          // argmax; ties break toward the lower phase
    double map_phase = 0.0;
    double mean_phase = 0.0;
    double variance = 0.0;  // grid second central moment
};

/// log N(x; 0, sigma_phi^2) = -(1/2) ln(2 pi sigma^2) - x^2 / (2 sigma^2).
double log_likelihood(double x, double phi, const SqueezedThermalProbe& probe);

/// Posterior from a batch under a uniform prior.
///
/// The per-point sum over samples of log_likelihood(x_i, phi_j) is evaluated
/// through the sufficient statistics of the zero-mean Gaussian model,
/// (M, sum_i x_i^2); the sum of squares is accumulated with Neumaier
/// compensation in batch order, so permuting the batch moves the resulting
/// probabilities by less than 1e-12. Max-shifted exponentiation keeps the
/// normalization exact for batches up to 1e7 samples. An empty batch
/// returns the prior.
Posterior posterior(const HomodyneBatch& batch, const SqueezedThermalProbe& probe,
                    const PhaseGrid& grid);

/// Same with an explicit prior given as per-point masses normalized to 1.
Posterior posterior(const HomodyneBatch& batch, const SqueezedThermalProbe& probe,
                    const PhaseGrid& grid, std::span<const double> prior);

/// Normalization and moments shared by every engine: max-shifted
/// exponentiation, compensated sums, MAP with the low-phase tie break.
Posterior posterior_from_log_weights(const PhaseGrid& grid, std::vector<double> log_weights);

/// (phase, probability) CSV rows.
void write_posterior_csv(const Posterior& posterior, const std::filesystem::path& path);

}  // namespace sqpe
