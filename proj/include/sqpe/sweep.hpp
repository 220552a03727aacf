#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "sqpe/bounds.hpp"
#include "sqpe/grid.hpp"
#include "sqpe/probe.hpp"
#include "sqpe/protocol.hpp"

namespace sqpe {

enum class EngineKind { exact, lut };

/// Monte-Carlo experiment description. The emitted files are a pure
/// function of this struct: no timestamps, no machine information, and a
/// fixed seed-derivation rule (see rng.hpp).
struct SweepSpec {
    SqueezedThermalProbe probe = probe_from_db(5.69, 11.83);
    std::vector<double> phases;             // default: 7 values spread over (0, pi/2]
    std::vector<std::size_t> n_tot_values;  // default: {1000, 3000, 10000, 30000}
    std::size_t repetitions = 80;
    double rough_fraction = 0.1;
    bool run_adaptive = true;
    bool run_nonadaptive = false;
    EngineKind engine = EngineKind::exact;
    std::uint64_t master_seed = 1;
    std::size_t grid_points = 2048;
};

std::vector<double> default_phases();
std::vector<std::size_t> default_n_ladder();

/// One protocol run plus the sweep coordinates that produced it.
struct RunRow {
    std::size_t phase_index = 0;
    std::size_t n_index = 0;
    std::size_t repetition = 0;
    bool adaptive = true;
    std::size_t n_tot = 0;
    std::uint64_t seed = 0;
    EstimationRecord rec;
};

/// Aggregate of one (phase, n_tot, mode) cell or one (n_tot, mode) band.
struct RunSummary {
    double phase = 0.0;  // NaN for rows aggregated over phases
    std::size_t n_tot = 0;
    bool adaptive = true;
    std::size_t phases = 1;       // number of phases folded into the row
    std::size_t repetitions = 0;  // repetitions per phase
    double mean_variance = 0.0;   // mean posterior variance across runs
    double std_variance = 0.0;    // sample standard deviation (n-1)
    double mse = 0.0;             // mean squared final-estimate error
    double clamp_rate = 0.0;
    double sql = 0.0, qcr_coherent = 0.0, ocr = 0.0, qcr_pure = 0.0, heisenberg_ref = 0.0;
};

struct SweepResult {
    std::vector<RunRow> runs;
    std::vector<RunSummary> summaries;
};

/// Variance versus input phase at a single budget: requires exactly one
/// n_tot value; one summary row per (phase, mode).
SweepResult sweep_phase(const SweepSpec& spec);

/// Variance versus budget: one summary row per (n_tot, mode), averaged over
/// all phases and repetitions.
SweepResult sweep_n(const SweepSpec& spec);

/// Writes {prefix}_runs.csv, {prefix}_summary.csv and {prefix}_meta.json
/// into out_dir (created if missing). All writes are atomic renames.
/// `command` tags the meta file and selects the summary schema
/// ("sweep-phase" or "sweep-n").
void write_sweep_outputs(const SweepResult& result, const SweepSpec& spec,
                         const std::string& command, const std::filesystem::path& out_dir,
                         const std::string& prefix);

/// Plot-ready Fisher/Cramer-Rao data: {prefix}.csv with (phi, F(phi),
/// 1/(N F(phi))) rows and {prefix}.json with the scalar bounds.
void emit_bounds(const SqueezedThermalProbe& probe, std::size_t n_samples, const PhaseGrid& grid,
                 const std::filesystem::path& out_dir, const std::string& prefix);

}  // namespace sqpe
