#include "sqpe/posterior.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "sqpe/io.hpp"

namespace sqpe {

namespace {

// Neumaier-compensated accumulator; permutation effects stay at O(eps^2).
struct CompensatedSum {
    double sum = 0.0;
    double carry = 0.0;

    void add(double x) noexcept {
        const double t = sum + x;
        if (std::abs(sum) >= std::abs(x))
            carry += (sum - t) + x;
        else
            carry += (x - t) + sum;
        sum = t;
    }
    double value() const noexcept { return sum + carry; }
};

double sum_of_squares(std::span<const double> xs) {
    CompensatedSum acc;
    for (double x : xs) acc.add(x * x);
    return acc.value();
}

void check_prior(std::span<const double> prior, std::size_t grid_size) {
    if (prior.size() != grid_size)
        throw std::invalid_argument("posterior: prior size does not match the grid");
    CompensatedSum total;
    for (double p : prior) {
        if (!(p >= 0.0) || !std::isfinite(p))
            throw std::invalid_argument("posterior: prior masses must be finite and nonnegative");
        total.add(p);
    }
    if (std::abs(total.value() - 1.0) > 1e-6)
        throw std::invalid_argument("posterior: prior masses must sum to 1");
}

}  // namespace

double log_likelihood(double x, double phi, const SqueezedThermalProbe& probe) {
    const double v = quadrature_variance(probe, phi);
    return -0.5 * std::log(2.0 * std::numbers::pi * v) - x * x / (2.0 * v);
}

Posterior posterior_from_log_weights(const PhaseGrid& grid, std::vector<double> log_weights) {
    const std::size_t g = grid.size();
    if (log_weights.size() != g)
        throw std::invalid_argument("posterior_from_log_weights: weight count != grid size");

    std::size_t map = 0;
    for (std::size_t j = 1; j < g; ++j)
        if (log_weights[j] > log_weights[map]) map = j;  // strict: ties keep the lower phase

    const double shift = log_weights[map];
    std::vector<double> prob(g);
    CompensatedSum norm;
    for (std::size_t j = 0; j < g; ++j) {
        prob[j] = std::exp(log_weights[j] - shift);
        norm.add(prob[j]);
    }
    const double z = norm.value();
    for (double& p : prob) p /= z;

    CompensatedSum mean_acc;
    for (std::size_t j = 0; j < g; ++j) mean_acc.add(prob[j] * grid[j]);
    const double mean = mean_acc.value();

    CompensatedSum var_acc;
    for (std::size_t j = 0; j < g; ++j) {
        const double d = grid[j] - mean;
        var_acc.add(prob[j] * d * d);
    }

    Posterior post{grid, std::move(log_weights), std::move(prob), map, grid[map], mean,
                   var_acc.value()};
    return post;
}

Posterior posterior(const HomodyneBatch& batch, const SqueezedThermalProbe& probe,
                    const PhaseGrid& grid) {
    return posterior(batch, probe, grid, {});
}

Posterior posterior(const HomodyneBatch& batch, const SqueezedThermalProbe& probe,
                    const PhaseGrid& grid, std::span<const double> prior) {
    if (!prior.empty()) check_prior(prior, grid.size());

    const double m = static_cast<double>(batch.samples.size());
    const double s2 = sum_of_squares(batch.samples);

    std::vector<double> log_weights(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) {
        const double v = quadrature_variance(probe, grid[j]);
        // sum_i log N(x_i; 0, v) = -(M/2) ln(2 pi v) - (sum_i x_i^2) / (2 v)
        log_weights[j] = -0.5 * m * std::log(2.0 * std::numbers::pi * v) - 0.5 * s2 / v;
        if (!prior.empty()) log_weights[j] += std::log(prior[j]);
    }
    return posterior_from_log_weights(grid, std::move(log_weights));
}

void write_posterior_csv(const Posterior& posterior, const std::filesystem::path& path) {
    std::string text = "phase,probability\n";
    text.reserve(text.size() + posterior.probabilities.size() * 24);
    for (std::size_t j = 0; j < posterior.grid.size(); ++j) {
        text += format_double(posterior.grid[j]);
        text += ',';
        text += format_double(posterior.probabilities[j]);
        text += '\n';
    }
    atomic_write(path, text);
}

}  // namespace sqpe
