// Independent numerical oracles used to freeze expected values. These stay
// deliberately dumb: finite differences and composite Simpson quadrature,
// no reuse of the closed forms they are meant to check.
#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <vector>

#include "sqpe/probe.hpp"

namespace oracles {

inline double log_gaussian(double x, double variance) {
    return -0.5 * std::log(2.0 * std::numbers::pi * variance) - x * x / (2.0 * variance);
}

// Fisher information as the quadrature integral E(score^2) with the score
// taken by a five-point central difference of ln p(x | phi).
inline double fisher_by_quadrature(const sqpe::SqueezedThermalProbe& probe, double phi) {
    const double h = 1e-3;
    const double v_p1 = sqpe::quadrature_variance(probe, phi + h);
    const double v_p2 = sqpe::quadrature_variance(probe, phi + 2.0 * h);
    const double v_m1 = sqpe::quadrature_variance(probe, phi - h);
    const double v_m2 = sqpe::quadrature_variance(probe, phi - 2.0 * h);
    const double v = sqpe::quadrature_variance(probe, phi);
    const double sigma = std::sqrt(v);

    const int n = 20'000;  // composite Simpson, even interval count
    const double a = -12.0 * sigma;
    const double hx = 24.0 * sigma / n;
    double sum = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double x = a + i * hx;
        const double score = (-log_gaussian(x, v_p2) + 8.0 * log_gaussian(x, v_p1) -
                              8.0 * log_gaussian(x, v_m1) + log_gaussian(x, v_m2)) /
                             (12.0 * h);
        const double integrand = score * score * std::exp(log_gaussian(x, v));
        const double w = (i == 0 || i == n) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        sum += w * integrand;
    }
    return sum * hx / 3.0;
}

// Argmax of the Fisher information over a dense grid on [0, pi/2].
struct GridMax {
    double phi;
    double value;
};

inline GridMax fisher_grid_max(const sqpe::SqueezedThermalProbe& probe, std::size_t points) {
    GridMax best{0.0, -1.0};
    const double hi = std::numbers::pi / 2.0;
    for (std::size_t j = 0; j < points; ++j) {
        const double phi = hi * (static_cast<double>(j) / static_cast<double>(points - 1));
        const double f = sqpe::fisher_info(probe, phi);
        if (f > best.value) best = {phi, f};
    }
    return best;
}

inline double standard_normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

// One-sample Kolmogorov-Smirnov statistic against N(0, sigma^2).
inline double ks_statistic(std::span<const double> samples, double sigma) {
    std::vector<double> xs(samples.begin(), samples.end());
    std::sort(xs.begin(), xs.end());
    const double n = static_cast<double>(xs.size());
    double d = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double f = standard_normal_cdf(xs[i] / sigma);
        d = std::max(d, std::abs((i + 1) / n - f));
        d = std::max(d, std::abs(f - i / n));
    }
    return d;
}

inline double mean(std::span<const double> xs) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

inline double sample_variance(std::span<const double> xs) {
    const double m = mean(xs);
    double s = 0.0;
    for (double x : xs) s += (x - m) * (x - m);
    return s / static_cast<double>(xs.size() - 1);
}

inline double relative_gap(double a, double b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale < 1e-12 ? 0.0 : std::abs(a - b) / scale;
}

}  // namespace oracles
