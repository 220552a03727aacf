#pragma once

namespace sqpe {

/// Zero-mean Gaussian probe: squeezed vacuum polluted by thermal noise.
/// r is the squeezing parameter, n_th the mean thermal photon number.
/// All quadrature variances are in vacuum units (vacuum = shot noise = 1),
/// so the squeezed axis sits below 1 and the conjugate axis above it.
struct SqueezedThermalProbe {
    double r = 0.0;
    double n_th = 0.0;
};

/// Recovers (r, n_th) from measured noise levels: `squeezed_db` decibels
/// below vacuum along the quiet axis, `antisqueezed_db` decibels above
/// vacuum along the conjugate axis. Throws std::invalid_argument when the
/// pair violates the uncertainty product (it would imply n_th < 0) or when
/// the axes are swapped (r < 0).
SqueezedThermalProbe probe_from_db(double squeezed_db, double antisqueezed_db);

/// Variance of the quadrature measured at relative phase phi:
///   (2 n_th + 1) [e^{-2r} cos^2 phi + e^{2r} sin^2 phi],
/// evaluated in the cancellation-free form e^{-2r} + 2 sinh(2r) sin^2 phi.
/// pi-periodic and even in phi.
double quadrature_variance(const SqueezedThermalProbe& probe, double phi);

/// Mean photon number n_th + (2 n_th + 1) sinh^2 r.
double mean_photons(const SqueezedThermalProbe& probe);

/// Per-sample Fisher information of the homodyne outcome about phi:
///   F(phi) = (1/2) (d ln sigma_phi^2 / d phi)^2.
/// The thermal factor cancels from the log-derivative, so F is independent
/// of n_th by construction.
double fisher_info(const SqueezedThermalProbe& probe, double phi);

/// arctan(e^{-2r}), the phase where fisher_info attains qfi_pure(r).
/// Throws std::domain_error for r = 0: the Fisher information is flat zero
/// and feedback toward an "optimum" is meaningless.
double optimal_phase(const SqueezedThermalProbe& probe);

/// Quantum Fisher information of a pure squeezed vacuum: 2 sinh^2(2r),
/// equivalently 8 <n> (<n> + 1) with <n> = sinh^2 r.
double qfi_pure(double r);

/// Quantum Fisher information of a coherent state: 4 <n>.
double qfi_coherent(double mean_n);

}  // namespace sqpe
