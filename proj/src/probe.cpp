#include "sqpe/probe.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sqpe {

namespace {

// sigma_phi^2 / (2 n_th + 1). Written as e^{-2r} + 2 sinh(2r) sin^2(phi):
// both terms are nonnegative, so no cancellation for any r.
double pure_variance_factor(double r, double phi) {
    const double s = std::sin(phi);
    return std::exp(-2.0 * r) + 2.0 * std::sinh(2.0 * r) * s * s;
}

}  // namespace

SqueezedThermalProbe probe_from_db(double squeezed_db, double antisqueezed_db) {
    if (!(std::isfinite(squeezed_db) && std::isfinite(antisqueezed_db)))
        throw std::invalid_argument("probe_from_db: non-finite dB value");
    if (antisqueezed_db < squeezed_db)
        throw std::invalid_argument(
            "probe_from_db: variance product below the uncertainty bound "
            "(antisqueezed_db < squeezed_db would imply n_th < 0)");
    if (antisqueezed_db + squeezed_db < 0.0)
        throw std::invalid_argument(
            "probe_from_db: squeezed axis is the noisier one (r < 0); swap the arguments");
    // V_sq = 10^(-sq/10), V_as = 10^(as/10);
    // r = (1/4) ln(V_as/V_sq), n_th = (sqrt(V_sq V_as) - 1) / 2,
    // both evaluated directly from the dB values.
    const double r = std::numbers::ln10 * (antisqueezed_db + squeezed_db) / 40.0;
    const double n_th = (std::pow(10.0, (antisqueezed_db - squeezed_db) / 20.0) - 1.0) / 2.0;
    return {r, n_th};
}

double quadrature_variance(const SqueezedThermalProbe& probe, double phi) {
    return (2.0 * probe.n_th + 1.0) * pure_variance_factor(probe.r, phi);
}

double mean_photons(const SqueezedThermalProbe& probe) {
    const double sh = std::sinh(probe.r);
    return probe.n_th + (2.0 * probe.n_th + 1.0) * sh * sh;
}

double fisher_info(const SqueezedThermalProbe& probe, double phi) {
    // F = (1/2) (d ln sigma^2 / d phi)^2 = 2 [sinh(2r) sin(2 phi) / D]^2
    // with D = e^{-2r} + 2 sinh(2r) sin^2(phi); n_th cancels.
    const double ratio = std::sinh(2.0 * probe.r) * std::sin(2.0 * phi) /
                         pure_variance_factor(probe.r, phi);
    return 2.0 * ratio * ratio;
}

double optimal_phase(const SqueezedThermalProbe& probe) {
    if (!(probe.r > 0.0))
        throw std::domain_error(
            "optimal_phase: degenerate probe (r = 0 carries no phase information)");
    return std::atan(std::exp(-2.0 * probe.r));
}

double qfi_pure(double r) {
    const double s = std::sinh(2.0 * r);
    return 2.0 * s * s;
}

double qfi_coherent(double mean_n) {
    return 4.0 * mean_n;
}

}  // namespace sqpe
