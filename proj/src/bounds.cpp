#include "sqpe/bounds.hpp"

#include <stdexcept>

namespace sqpe {

BoundsReport bounds_report(const SqueezedThermalProbe& probe, std::size_t n_samples,
                           const PhaseGrid& grid) {
    if (n_samples < 1) throw std::invalid_argument("bounds_report: n_samples must be >= 1");

    BoundsReport report;
    report.probe = probe;
    report.n_samples = n_samples;
    report.phi_opt = optimal_phase(probe);  // throws for degenerate probes
    report.mean_n = mean_photons(probe);

    report.phases.assign(grid.values().begin(), grid.values().end());
    report.fisher_curve.resize(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j)
        report.fisher_curve[j] = fisher_info(probe, grid[j]);

    const double n = static_cast<double>(n_samples);
    const double energy = report.mean_n;
    report.ocr = 1.0 / (n * fisher_info(probe, report.phi_opt));
    report.qcr_pure = 1.0 / (n * 8.0 * energy * (energy + 1.0));
    report.qcr_coherent = 1.0 / (4.0 * n * energy);
    report.sql = 1.0 / (2.0 * n * energy);
    report.heisenberg_ref = 1.0 / (n * energy * energy);
    return report;
}

}  // namespace sqpe
