#pragma once

#include <cstdint>
#include <functional>

#include "sqpe/grid.hpp"
#include "sqpe/homodyne.hpp"
#include "sqpe/posterior.hpp"
#include "sqpe/probe.hpp"
#include "sqpe/rng.hpp"

namespace sqpe {

struct ProtocolConfig {
    std::size_t n_tot = 10'000;
    double rough_fraction = 0.1;  // M_R = round(rough_fraction * n_tot), M_F = rest
    PhaseGrid grid{2048};
    bool adaptive = true;
    std::uint64_t seed = 0;  // used by callers that own stream construction
};

std::size_t rough_sample_count(const ProtocolConfig& config);

/// Throws std::invalid_argument when the sample split is unusable
/// (M_R < 1, M_F < 1, or M_F <= M_R for an adaptive run).
void validate(const ProtocolConfig& config);

/// Full audit trail of one estimation run.
struct EstimationRecord {
    double true_phase = 0.0;
    double rough_estimate = 0.0;        // NaN for non-adaptive runs
    double rough_error = 0.0;           // NaN for non-adaptive runs
    double feedback_shift = 0.0;        // Delta = rough_estimate - phi_opt; 0 when non-adaptive
    double corrected_phase = 0.0;       // true_phase - Delta, the phase the final stage samples
    double final_stage_estimate = 0.0;  // MAP of the final-stage posterior
    double final_estimate = 0.0;        // final_stage_estimate + Delta, clamped to [0, pi/2]
    double final_error = 0.0;           // final_estimate - true_phase
    double posterior_variance = 0.0;    // final-stage posterior variance
    std::size_t m_rough = 0;
    std::size_t m_final = 0;
    bool clamped = false;
};

/// Point estimate and width one stage estimator reports for a batch.
struct StageEstimate {
    double map_phase = 0.0;
    double variance = 0.0;
};

/// Pluggable per-stage engine; a default-constructed (empty) estimator
/// means the exact Bayesian engine on the config grid.
using StageEstimator = std::function<StageEstimate(const HomodyneBatch&)>;

/// Two-stage feedback run: a rough Bayesian estimate at the unknown phase,
/// a local-oscillator shift Delta = rough - phi_opt, and a final Bayesian
/// estimate taken near the optimal phase. If the corrected phase leaves
/// [0, pi/2] the sampler still draws at the signed phase (the statistics
/// are even in phi); if the recombined estimate leaves the interval it is
/// clamped and flagged.
EstimationRecord run_adaptive(const SqueezedThermalProbe& probe, double true_phase,
                              const ProtocolConfig& config, RandomStream& stream,
                              const StageEstimator& estimator = {});

/// Baseline: the whole budget spent at the unknown phase, no feedback.
EstimationRecord run_nonadaptive(const SqueezedThermalProbe& probe, double true_phase,
                                 const ProtocolConfig& config, RandomStream& stream,
                                 const StageEstimator& estimator = {});

}  // namespace sqpe
