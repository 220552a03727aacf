#pragma once

#include <cstddef>
#include <vector>

#include "sqpe/grid.hpp"
#include "sqpe/probe.hpp"

namespace sqpe {

/// Fisher-information curve and every estimation-variance bound for one
/// probe and sample budget. All variances in rad^2.
struct BoundsReport {
    SqueezedThermalProbe probe;
    std::size_t n_samples = 0;
    std::vector<double> phases;
    std::vector<double> fisher_curve;
    double phi_opt = 0.0;
    double mean_n = 0.0;
    double ocr = 0.0;             // 1 / (N max_phi F(phi)); the realistic homodyne target
    double qcr_pure = 0.0;        // 1 / (N 8<n>(<n>+1)); pure squeezed state of equal energy
    double qcr_coherent = 0.0;    // 1 / (4 N <n>); coherent-state quantum bound
    double sql = 0.0;             // 1 / (2 N <n>); heterodyne benchmark
    double heisenberg_ref = 0.0;  // 1 / (N <n>^2); reference scaling line
};

/// Throws std::domain_error for a degenerate probe (r = 0: no Fisher
/// optimum, zero energy) and std::invalid_argument for n_samples = 0.
BoundsReport bounds_report(const SqueezedThermalProbe& probe, std::size_t n_samples,
                           const PhaseGrid& grid);

}  // namespace sqpe
