#include "sqpe/sweep.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>

#include "json.hpp"
#include "sqpe/io.hpp"
#include "sqpe/lut.hpp"

namespace sqpe {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;

void validate_spec(const SweepSpec& spec) {
    if (!(spec.probe.r >= 0.0 && spec.probe.n_th >= 0.0))
        throw std::invalid_argument("sweep: probe parameters must be nonnegative");
    if (spec.phases.empty()) throw std::invalid_argument("sweep: phase list is empty");
    for (double phi : spec.phases)
        if (!(phi > 0.0 && phi <= kHalfPi + 1e-12))
            throw std::invalid_argument("sweep: phases must lie in (0, pi/2]");
    if (spec.n_tot_values.empty()) throw std::invalid_argument("sweep: n_tot list is empty");
    for (std::size_t n : spec.n_tot_values)
        if (n < 1) throw std::invalid_argument("sweep: n_tot values must be >= 1");
    if (spec.repetitions < 2)
        throw std::invalid_argument("sweep: need at least 2 repetitions");
    if (!(spec.rough_fraction > 0.0 && spec.rough_fraction < 1.0))
        throw std::invalid_argument("sweep: rough_fraction must lie in (0, 1)");
    if (!spec.run_adaptive && !spec.run_nonadaptive)
        throw std::invalid_argument("sweep: no mode selected");
    if (spec.grid_points < 2) throw std::invalid_argument("sweep: grid too small");
}

std::uint64_t run_seed(const SweepSpec& spec, std::size_t phase_index, std::size_t n_index,
                       bool adaptive, std::size_t repetition) {
    std::uint64_t s = fold_seed(spec.master_seed, phase_index);
    s = fold_seed(s, n_index);
    s = fold_seed(s, adaptive ? 1 : 0);
    return repetition_seed(s, repetition);
}

SweepResult execute(const SweepSpec& spec) {
    validate_spec(spec);
    // Fail on degenerate probes before the parallel region; exceptions must
    // not cross an OpenMP boundary.
    if (spec.run_adaptive) (void)optimal_phase(spec.probe);

    const PhaseGrid grid(spec.grid_points);
    std::optional<LikelihoodTable> table;
    StageEstimator estimator;  // empty = exact engine
    if (spec.engine == EngineKind::lut) {
        table.emplace(build_table(spec.probe, grid, default_quantizer(spec.probe)));
        estimator = [&table](const HomodyneBatch& batch) -> StageEstimate {
            StreamState state(table->grid_points());
            state.update_batch(*table, batch.samples);
            const Posterior post = finalize(state, *table);
            return {post.map_phase, post.variance};
        };
    }

    // Validate every configuration up front so a failing run cannot leave a
    // half-filled result behind.
    std::vector<RunRow> rows;
    for (std::size_t ni = 0; ni < spec.n_tot_values.size(); ++ni) {
        ProtocolConfig cfg;
        cfg.n_tot = spec.n_tot_values[ni];
        cfg.rough_fraction = spec.rough_fraction;
        for (int mode = 0; mode < 2; ++mode) {
            const bool adaptive = mode == 0;
            if (adaptive && !spec.run_adaptive) continue;
            if (!adaptive && !spec.run_nonadaptive) continue;
            cfg.adaptive = adaptive;
            validate(cfg);
            for (std::size_t pi = 0; pi < spec.phases.size(); ++pi)
                for (std::size_t rep = 0; rep < spec.repetitions; ++rep)
                    rows.push_back({pi, ni, rep, adaptive, cfg.n_tot,
                                    run_seed(spec, pi, ni, adaptive, rep), {}});
        }
    }

    ProtocolConfig cfg;
    cfg.rough_fraction = spec.rough_fraction;
    cfg.grid = grid;

    const std::int64_t total = static_cast<std::int64_t>(rows.size());
#pragma omp parallel for schedule(dynamic) firstprivate(cfg)
    for (std::int64_t i = 0; i < total; ++i) {
        RunRow& row = rows[static_cast<std::size_t>(i)];
        cfg.n_tot = row.n_tot;
        cfg.adaptive = row.adaptive;
        cfg.seed = row.seed;
        RandomStream stream{row.seed, 0};
        const double phi = spec.phases[row.phase_index];
        row.rec = row.adaptive ? run_adaptive(spec.probe, phi, cfg, stream, estimator)
                               : run_nonadaptive(spec.probe, phi, cfg, stream, estimator);
    }

    SweepResult result;
    result.runs = std::move(rows);
    return result;
}

RunSummary summarize(const SweepSpec& spec, const std::vector<RunRow>& runs,
                     std::size_t n_index, bool adaptive,
                     std::optional<std::size_t> phase_index) {
    RunSummary s;
    s.n_tot = spec.n_tot_values[n_index];
    s.adaptive = adaptive;
    s.repetitions = spec.repetitions;
    if (phase_index) {
        s.phase = spec.phases[*phase_index];
        s.phases = 1;
    } else {
        s.phase = std::numeric_limits<double>::quiet_NaN();
        s.phases = spec.phases.size();
    }

    double sum_v = 0.0, sum_sq_err = 0.0;
    std::size_t n = 0, clamped = 0;
    for (const RunRow& row : runs) {
        if (row.n_index != n_index || row.adaptive != adaptive) continue;
        if (phase_index && row.phase_index != *phase_index) continue;
        sum_v += row.rec.posterior_variance;
        sum_sq_err += row.rec.final_error * row.rec.final_error;
        clamped += row.rec.clamped ? 1 : 0;
        ++n;
    }
    s.mean_variance = sum_v / double(n);
    s.mse = sum_sq_err / double(n);
    s.clamp_rate = double(clamped) / double(n);

    double ss = 0.0;
    for (const RunRow& row : runs) {
        if (row.n_index != n_index || row.adaptive != adaptive) continue;
        if (phase_index && row.phase_index != *phase_index) continue;
        const double d = row.rec.posterior_variance - s.mean_variance;
        ss += d * d;
    }
    s.std_variance = std::sqrt(ss / double(n - 1));

    const BoundsReport bounds = bounds_report(spec.probe, s.n_tot, PhaseGrid(2));
    s.sql = bounds.sql;
    s.qcr_coherent = bounds.qcr_coherent;
    s.ocr = bounds.ocr;
    s.qcr_pure = bounds.qcr_pure;
    s.heisenberg_ref = bounds.heisenberg_ref;
    return s;
}

void append_modes(const SweepSpec& spec, std::vector<bool>& modes) {
    if (spec.run_adaptive) modes.push_back(true);
    if (spec.run_nonadaptive) modes.push_back(false);
}

}  // namespace

std::vector<double> default_phases() {
    std::vector<double> phases(7);
    for (std::size_t k = 0; k < 7; ++k)
        phases[k] = kHalfPi * (static_cast<double>(k + 1) / 7.0);
    return phases;
}

std::vector<std::size_t> default_n_ladder() { return {1000, 3000, 10000, 30000}; }

SweepResult sweep_phase(const SweepSpec& spec) {
    if (spec.n_tot_values.size() != 1)
        throw std::invalid_argument("sweep_phase: exactly one n_tot value required");
    SweepResult result = execute(spec);
    std::vector<bool> modes;
    append_modes(spec, modes);
    for (bool adaptive : modes)
        for (std::size_t pi = 0; pi < spec.phases.size(); ++pi)
            result.summaries.push_back(summarize(spec, result.runs, 0, adaptive, pi));
    return result;
}

SweepResult sweep_n(const SweepSpec& spec) {
    SweepResult result = execute(spec);
    std::vector<bool> modes;
    append_modes(spec, modes);
    for (bool adaptive : modes)
        for (std::size_t ni = 0; ni < spec.n_tot_values.size(); ++ni)
            result.summaries.push_back(summarize(spec, result.runs, ni, adaptive, std::nullopt));
    return result;
}

namespace {

const char* mode_name(bool adaptive) { return adaptive ? "adaptive" : "nonadaptive"; }

std::string runs_csv(const SweepSpec& spec, const std::vector<RunRow>& runs) {
    std::string text =
        "phase_index,true_phase,n_tot,mode,repetition,seed,m_rough,m_final,rough_estimate,"
        "rough_error,feedback_shift,corrected_phase,final_stage_estimate,final_estimate,"
        "final_error,posterior_variance,clamped\n";
    for (const RunRow& row : runs) {
        const EstimationRecord& r = row.rec;
        text += format_u64(row.phase_index);
        text += ',';
        text += format_double(spec.phases[row.phase_index]);
        text += ',';
        text += format_u64(row.n_tot);
        text += ',';
        text += mode_name(row.adaptive);
        text += ',';
        text += format_u64(row.repetition);
        text += ',';
        text += format_u64(row.seed);
        text += ',';
        text += format_u64(r.m_rough);
        text += ',';
        text += format_u64(r.m_final);
        text += ',';
        text += format_double(r.rough_estimate);
        text += ',';
        text += format_double(r.rough_error);
        text += ',';
        text += format_double(r.feedback_shift);
        text += ',';
        text += format_double(r.corrected_phase);
        text += ',';
        text += format_double(r.final_stage_estimate);
        text += ',';
        text += format_double(r.final_estimate);
        text += ',';
        text += format_double(r.final_error);
        text += ',';
        text += format_double(r.posterior_variance);
        text += ',';
        text += row.rec.clamped ? '1' : '0';
        text += '\n';
    }
    return text;
}

std::string summary_csv(const std::string& command, const std::vector<RunSummary>& summaries) {
    const bool per_phase = command == "sweep-phase";
    std::string text =
        per_phase
            ? "true_phase,n_tot,mode,repetitions,mean_ppd_variance,std_ppd_variance,mse,"
              "clamp_rate,sql,qcr_coherent,ocr,qcr_pure,heisenberg_ref\n"
            : "n_tot,mode,phases,repetitions_per_phase,runs,mean_ppd_variance,std_ppd_variance,"
              "mse,clamp_rate,sql,qcr_coherent,ocr,qcr_pure,heisenberg_ref\n";
    for (const RunSummary& s : summaries) {
        if (per_phase) {
            text += format_double(s.phase);
            text += ',';
            text += format_u64(s.n_tot);
            text += ',';
            text += mode_name(s.adaptive);
            text += ',';
            text += format_u64(s.repetitions);
        } else {
            text += format_u64(s.n_tot);
            text += ',';
            text += mode_name(s.adaptive);
            text += ',';
            text += format_u64(s.phases);
            text += ',';
            text += format_u64(s.repetitions);
            text += ',';
            text += format_u64(s.phases * s.repetitions);
        }
        for (double v : {s.mean_variance, s.std_variance, s.mse, s.clamp_rate, s.sql,
                         s.qcr_coherent, s.ocr, s.qcr_pure, s.heisenberg_ref}) {
            text += ',';
            text += format_double(v);
        }
        text += '\n';
    }
    return text;
}

std::string meta_json(const SweepSpec& spec, const std::string& command) {
    nlohmann::json j;
    j["command"] = command;
    j["version"] = std::string(kVersion);
    j["probe"] = {{"r", spec.probe.r}, {"n_th", spec.probe.n_th}};
    j["phases"] = spec.phases;
    j["n_tot_values"] = spec.n_tot_values;
    j["repetitions"] = spec.repetitions;
    j["rough_fraction"] = spec.rough_fraction;
    std::vector<std::string> modes;
    if (spec.run_adaptive) modes.emplace_back("adaptive");
    if (spec.run_nonadaptive) modes.emplace_back("nonadaptive");
    j["modes"] = modes;
    j["engine"] = spec.engine == EngineKind::lut ? "lut" : "exact";
    j["master_seed"] = spec.master_seed;
    j["grid_points"] = spec.grid_points;
    j["seed_rule"] =
        "run_seed = fold(fold(fold(master_seed, phase_index), n_index), adaptive ? 1 : 0) "
        "XOR repetition; fold(b, s) = splitmix64_mix(b + (s + 1) * 0x9E3779B97F4A7C15)";
    return j.dump(2) + "\n";
}

}  // namespace

void write_sweep_outputs(const SweepResult& result, const SweepSpec& spec,
                         const std::string& command, const std::filesystem::path& out_dir,
                         const std::string& prefix) {
    std::filesystem::create_directories(out_dir);
    atomic_write(out_dir / (prefix + "_runs.csv"), runs_csv(spec, result.runs));
    atomic_write(out_dir / (prefix + "_summary.csv"), summary_csv(command, result.summaries));
    atomic_write(out_dir / (prefix + "_meta.json"), meta_json(spec, command));
}

void emit_bounds(const SqueezedThermalProbe& probe, std::size_t n_samples, const PhaseGrid& grid,
                 const std::filesystem::path& out_dir, const std::string& prefix) {
    const BoundsReport report = bounds_report(probe, n_samples, grid);

    std::string csv = "phi,fisher_info,cr_variance\n";
    const double n = static_cast<double>(n_samples);
    for (std::size_t j = 0; j < report.phases.size(); ++j) {
        csv += format_double(report.phases[j]);
        csv += ',';
        csv += format_double(report.fisher_curve[j]);
        csv += ',';
        csv += format_double(1.0 / (n * report.fisher_curve[j]));
        csv += '\n';
    }

    nlohmann::json j;
    j["version"] = std::string(kVersion);
    j["probe"] = {{"r", probe.r}, {"n_th", probe.n_th}};
    j["n_samples"] = n_samples;
    j["mean_photons"] = report.mean_n;
    j["phi_opt"] = report.phi_opt;
    j["qfi_pure"] = qfi_pure(probe.r);
    j["qfi_coherent"] = qfi_coherent(report.mean_n);
    j["ocr"] = report.ocr;
    j["qcr_pure"] = report.qcr_pure;
    j["qcr_coherent"] = report.qcr_coherent;
    j["sql"] = report.sql;
    j["heisenberg_ref"] = report.heisenberg_ref;

    std::filesystem::create_directories(out_dir);
    atomic_write(out_dir / (prefix + ".csv"), csv);
    atomic_write(out_dir / (prefix + ".json"), j.dump(2) + "\n");
}

}  // namespace sqpe
