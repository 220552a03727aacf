#include "sqpe/protocol.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace sqpe {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;

StageEstimate estimate_stage(const HomodyneBatch& batch, const SqueezedThermalProbe& probe,
                             const ProtocolConfig& config, const StageEstimator& estimator) {
    if (estimator) return estimator(batch);
    const Posterior post = posterior(batch, probe, config.grid);
    return {post.map_phase, post.variance};
}

void check_budget(std::size_t n_tot) {
    if (n_tot < 1) throw std::invalid_argument("protocol: n_tot must be >= 1");
}

}  // namespace

std::size_t rough_sample_count(const ProtocolConfig& config) {
    return static_cast<std::size_t>(
        std::llround(config.rough_fraction * static_cast<double>(config.n_tot)));
}

void validate(const ProtocolConfig& config) {
    check_budget(config.n_tot);
    if (!(config.rough_fraction > 0.0 && config.rough_fraction < 1.0))
        throw std::invalid_argument("protocol: rough_fraction must lie in (0, 1)");
    if (config.adaptive) {
        const std::size_t m_rough = rough_sample_count(config);
        if (m_rough < 1)
            throw std::invalid_argument("protocol: rough stage would get zero samples");
        if (config.n_tot - m_rough < 1)
            throw std::invalid_argument("protocol: final stage would get zero samples");
        if (config.n_tot - m_rough <= m_rough)
            throw std::invalid_argument("protocol: adaptive runs need M_F > M_R");
    }
}

EstimationRecord run_adaptive(const SqueezedThermalProbe& probe, double true_phase,
                              const ProtocolConfig& config, RandomStream& stream,
                              const StageEstimator& estimator) {
    ProtocolConfig checked = config;
    checked.adaptive = true;
    validate(checked);
    const double phi_opt = optimal_phase(probe);  // rejects degenerate probes

    const std::size_t m_rough = rough_sample_count(config);
    const std::size_t m_final = config.n_tot - m_rough;

    EstimationRecord rec;
    rec.true_phase = true_phase;
    rec.m_rough = m_rough;
    rec.m_final = m_final;

    const HomodyneBatch rough_batch = sample_homodyne(probe, true_phase, m_rough, stream);
    rec.rough_estimate = estimate_stage(rough_batch, probe, config, estimator).map_phase;
    rec.rough_error = rec.rough_estimate - true_phase;

    rec.feedback_shift = rec.rough_estimate - phi_opt;
    rec.corrected_phase = true_phase - rec.feedback_shift;

    const HomodyneBatch final_batch = sample_homodyne(probe, rec.corrected_phase, m_final, stream);
    const StageEstimate fin = estimate_stage(final_batch, probe, config, estimator);
    rec.final_stage_estimate = fin.map_phase;
    rec.posterior_variance = fin.variance;

    const double raw_estimate = rec.final_stage_estimate + rec.feedback_shift;
    rec.clamped = raw_estimate < 0.0 || raw_estimate > kHalfPi;
    rec.final_estimate = std::min(std::max(raw_estimate, 0.0), kHalfPi);
    rec.final_error = rec.final_estimate - true_phase;
    return rec;
}

EstimationRecord run_nonadaptive(const SqueezedThermalProbe& probe, double true_phase,
                                 const ProtocolConfig& config, RandomStream& stream,
                                 const StageEstimator& estimator) {
    check_budget(config.n_tot);

    EstimationRecord rec;
    rec.true_phase = true_phase;
    rec.rough_estimate = std::numeric_limits<double>::quiet_NaN();
    rec.rough_error = std::numeric_limits<double>::quiet_NaN();
    rec.feedback_shift = 0.0;
    rec.corrected_phase = true_phase;
    rec.m_rough = 0;
    rec.m_final = config.n_tot;

    const HomodyneBatch batch = sample_homodyne(probe, true_phase, config.n_tot, stream);
    const StageEstimate fin = estimate_stage(batch, probe, config, estimator);
    rec.final_stage_estimate = fin.map_phase;
    rec.posterior_variance = fin.variance;
    rec.final_estimate = fin.map_phase;  // MAP lives on the grid, no clamp possible
    rec.final_error = rec.final_estimate - true_phase;
    return rec;
}

}  // namespace sqpe
