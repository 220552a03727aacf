// Command-line front end: bound curves, Monte-Carlo sweeps, LUT benchmarks
// and single verbose runs, all emitting deterministic CSV/JSON files.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "sqpe/bounds.hpp"
#include "sqpe/io.hpp"
#include "sqpe/lut.hpp"
#include "sqpe/posterior.hpp"
#include "sqpe/probe.hpp"
#include "sqpe/protocol.hpp"
#include "sqpe/sweep.hpp"

namespace {

struct ProbeOpts {
    std::vector<double> db{5.69, 11.83};
    std::vector<double> rn;

    sqpe::SqueezedThermalProbe resolve() const {
        if (!rn.empty()) {
            if (!(rn[0] >= 0.0 && rn[1] >= 0.0))
                throw std::invalid_argument("--probe: r and n_th must be nonnegative");
            return {rn[0], rn[1]};
        }
        return sqpe::probe_from_db(db[0], db[1]);
    }
};

void add_probe_options(CLI::App* cmd, ProbeOpts& opts) {
    auto* db = cmd->add_option("--db", opts.db,
                               "Squeezed/antisqueezed noise levels in dB relative to vacuum")
                   ->expected(2)
                   ->capture_default_str();
    cmd->add_option("--probe", opts.rn, "Probe parameters r and n_th (overrides --db)")
        ->expected(2)
        ->excludes(db);
}

std::string mode_json(const sqpe::EstimationRecord& r) {
    nlohmann::json j;
    j["true_phase"] = r.true_phase;
    j["rough_estimate"] = r.rough_estimate;
    j["rough_error"] = r.rough_error;
    j["feedback_shift"] = r.feedback_shift;
    j["corrected_phase"] = r.corrected_phase;
    j["final_stage_estimate"] = r.final_stage_estimate;
    j["final_estimate"] = r.final_estimate;
    j["final_error"] = r.final_error;
    j["posterior_variance"] = r.posterior_variance;
    j["m_rough"] = r.m_rough;
    j["m_final"] = r.m_final;
    j["clamped"] = r.clamped;
    return j.dump(2) + "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"sqpe: squeezed-light adaptive Bayesian phase estimation simulator"};
    app.require_subcommand(1);
    app.fallthrough();  // allow --out-dir after the subcommand name
    app.set_config("--config", "", "Read options from a key=value config file");
    app.set_version_flag("--version", std::string(sqpe::kVersion));

    std::filesystem::path out_dir = ".";
    app.add_option("--out-dir", out_dir, "Output directory (created if missing)")
        ->envname("SQPE_OUT_DIR")
        ->capture_default_str();

    // ---- bounds ----------------------------------------------------------
    auto* bounds_cmd = app.add_subcommand("bounds", "Emit the Fisher-information curve and "
                                                    "every variance bound for one probe");
    ProbeOpts bounds_probe;
    add_probe_options(bounds_cmd, bounds_probe);
    std::size_t bounds_n = 10'000;
    std::size_t bounds_grid = 2048;
    std::string bounds_prefix = "bounds";
    bounds_cmd->add_option("--n-samples", bounds_n, "Sample budget N")->capture_default_str();
    bounds_cmd->add_option("--grid-points", bounds_grid, "Phase grid resolution")
        ->capture_default_str();
    bounds_cmd->add_option("--prefix", bounds_prefix, "Output file prefix")
        ->capture_default_str();
    bounds_cmd->callback([&] {
        const auto probe = bounds_probe.resolve();
        sqpe::emit_bounds(probe, bounds_n, sqpe::PhaseGrid(bounds_grid), out_dir, bounds_prefix);
        const auto report = sqpe::bounds_report(probe, bounds_n, sqpe::PhaseGrid(2));
        std::cout << "probe: r=" << sqpe::format_double(probe.r)
                  << " n_th=" << sqpe::format_double(probe.n_th)
                  << " <n>=" << sqpe::format_double(report.mean_n) << "\n"
                  << "phi_opt=" << sqpe::format_double(report.phi_opt)
                  << " qfi_pure=" << sqpe::format_double(sqpe::qfi_pure(probe.r)) << "\n"
                  << "N=" << bounds_n << ": sql=" << sqpe::format_double(report.sql)
                  << " qcr_coherent=" << sqpe::format_double(report.qcr_coherent)
                  << " ocr=" << sqpe::format_double(report.ocr)
                  << " qcr_pure=" << sqpe::format_double(report.qcr_pure) << "\n"
                  << "wrote " << (out_dir / (bounds_prefix + ".csv")).string() << " and .json\n";
    });

    // ---- sweeps ----------------------------------------------------------
    ProbeOpts sweep_probe;
    std::vector<double> phases;
    std::vector<std::size_t> n_list;
    std::size_t n_single = 10'000;
    std::size_t reps = 80;
    double rough_fraction = 0.1;
    std::vector<std::string> modes{"adaptive", "nonadaptive"};
    std::string engine = "exact";
    std::uint64_t seed = 1;
    std::size_t grid_points = 2048;
    std::string prefix;

    auto add_sweep_options = [&](CLI::App* cmd) {
        add_probe_options(cmd, sweep_probe);
        cmd->add_option("--phases", phases, "Input phases in (0, pi/2] (default: 7 spread values)");
        cmd->add_option("--reps", reps, "Repetitions per configuration")->capture_default_str();
        cmd->add_option("--rough-fraction", rough_fraction,
                        "Fraction of the budget spent on the rough stage")
            ->capture_default_str();
        cmd->add_option("--modes", modes, "Which protocols to run: adaptive, nonadaptive")
            ->check(CLI::IsMember({"adaptive", "nonadaptive"}));
        cmd->add_option("--engine", engine, "Stage estimator: exact or lut")
            ->check(CLI::IsMember({"exact", "lut"}))
            ->capture_default_str();
        cmd->add_option("--seed", seed, "Master seed")->capture_default_str();
        cmd->add_option("--grid-points", grid_points, "Phase grid resolution")
            ->capture_default_str();
        cmd->add_option("--prefix", prefix, "Output file prefix (default: command name)");
    };

    auto make_spec = [&](std::vector<std::size_t> n_values) {
        sqpe::SweepSpec spec;
        spec.probe = sweep_probe.resolve();
        spec.phases = phases.empty() ? sqpe::default_phases() : phases;
        spec.n_tot_values = std::move(n_values);
        spec.repetitions = reps;
        spec.rough_fraction = rough_fraction;
        spec.run_adaptive = false;
        spec.run_nonadaptive = false;
        for (const auto& m : modes) {
            if (m == "adaptive") spec.run_adaptive = true;
            if (m == "nonadaptive") spec.run_nonadaptive = true;
        }
        spec.engine = engine == "lut" ? sqpe::EngineKind::lut : sqpe::EngineKind::exact;
        spec.master_seed = seed;
        spec.grid_points = grid_points;
        return spec;
    };

    auto* sweep_phase_cmd =
        app.add_subcommand("sweep-phase", "Estimation variance versus input phase at one budget");
    add_sweep_options(sweep_phase_cmd);
    sweep_phase_cmd->add_option("--n-tot", n_single, "Total sample budget per run")
        ->capture_default_str();
    sweep_phase_cmd->callback([&] {
        const auto spec = make_spec({n_single});
        const auto result = sqpe::sweep_phase(spec);
        const std::string p = prefix.empty() ? "sweep_phase" : prefix;
        sqpe::write_sweep_outputs(result, spec, "sweep-phase", out_dir, p);
        std::cout << "ran " << result.runs.size() << " runs; wrote "
                  << (out_dir / (p + "_{runs,summary}.csv")).string() << " and "
                  << (out_dir / (p + "_meta.json")).string() << "\n";
    });

    auto* sweep_n_cmd =
        app.add_subcommand("sweep-n", "Estimation variance versus total sample budget");
    add_sweep_options(sweep_n_cmd);
    sweep_n_cmd->add_option("--n-tot-list", n_list, "Budgets to sweep (default 1e3 3e3 1e4 3e4)");
    sweep_n_cmd->callback([&] {
        const auto spec =
            make_spec(n_list.empty() ? sqpe::default_n_ladder() : n_list);
        const auto result = sqpe::sweep_n(spec);
        const std::string p = prefix.empty() ? "sweep_n" : prefix;
        sqpe::write_sweep_outputs(result, spec, "sweep-n", out_dir, p);
        std::cout << "ran " << result.runs.size() << " runs; wrote "
                  << (out_dir / (p + "_{runs,summary}.csv")).string() << " and "
                  << (out_dir / (p + "_meta.json")).string() << "\n";
    });

    // ---- bench-lut -------------------------------------------------------
    auto* bench_cmd = app.add_subcommand(
        "bench-lut", "Throughput and accuracy of the fixed-point LUT path versus the exact path");
    ProbeOpts bench_probe;
    add_probe_options(bench_cmd, bench_probe);
    std::size_t bench_m = 1'000'000;
    std::size_t bench_bins = 4096;
    int bench_scale_bits = 20;
    std::size_t bench_grid = 2048;
    std::uint64_t bench_seed = 1;
    std::string bench_prefix = "bench_lut";
    std::string dump_table;
    bench_cmd->add_option("--m", bench_m, "Samples to stream (>= 1e5)")->capture_default_str();
    bench_cmd->add_option("--bins", bench_bins, "Quantizer bins")->capture_default_str();
    bench_cmd->add_option("--scale-bits", bench_scale_bits, "Fixed-point scale = 2^bits")
        ->capture_default_str();
    bench_cmd->add_option("--grid-points", bench_grid, "Phase grid resolution")
        ->capture_default_str();
    bench_cmd->add_option("--seed", bench_seed, "Sample stream seed")->capture_default_str();
    bench_cmd->add_option("--prefix", bench_prefix, "Report file prefix")->capture_default_str();
    bench_cmd->add_option("--dump-table", dump_table, "Also dump the built table to this file");
    bench_cmd->callback([&] {
        const auto probe = bench_probe.resolve();
        const auto table = sqpe::build_table(
            probe, sqpe::PhaseGrid(bench_grid),
            sqpe::default_quantizer(probe, bench_bins, bench_scale_bits));
        if (!dump_table.empty()) table.save(dump_table);
        const auto report = sqpe::bench_throughput(table, bench_m, bench_seed);
        const std::string json = sqpe::to_json(report);
        std::filesystem::create_directories(out_dir);
        sqpe::atomic_write(out_dir / (bench_prefix + ".json"), json);
        std::cout << json;
    });

    // ---- run-one ---------------------------------------------------------
    auto* run_cmd =
        app.add_subcommand("run-one", "Single estimation run with a stage-by-stage trace");
    ProbeOpts run_probe;
    add_probe_options(run_cmd, run_probe);
    double run_phase = 0.0;
    std::size_t run_n = 10'000;
    double run_rf = 0.1;
    bool nonadaptive = false;
    std::string run_engine = "exact";
    std::uint64_t run_seed = 0;
    std::size_t run_grid = 2048;
    bool as_json = false;
    std::string dump_samples;
    std::string dump_posterior;
    run_cmd->add_option("--phase", run_phase, "True input phase in (0, pi/2]")->required();
    run_cmd->add_option("--n-tot", run_n, "Total sample budget")->capture_default_str();
    run_cmd->add_option("--rough-fraction", run_rf, "Rough-stage fraction")
        ->capture_default_str();
    run_cmd->add_flag("--nonadaptive", nonadaptive, "Skip the feedback stage");
    run_cmd->add_option("--engine", run_engine, "Stage estimator: exact or lut")
        ->check(CLI::IsMember({"exact", "lut"}))
        ->capture_default_str();
    run_cmd->add_option("--seed", run_seed, "Stream seed")->capture_default_str();
    run_cmd->add_option("--grid-points", run_grid, "Phase grid resolution")
        ->capture_default_str();
    run_cmd->add_flag("--json", as_json, "Print the record as JSON instead of the trace");
    run_cmd->add_option("--dump-samples", dump_samples,
                        "Write the stage batches as <prefix>.rough.txt / <prefix>.final.txt");
    run_cmd->add_option("--dump-posterior", dump_posterior,
                        "Write the final-stage posterior as (phase, probability) CSV");
    run_cmd->callback([&] {
        const auto probe = run_probe.resolve();
        sqpe::ProtocolConfig cfg;
        cfg.n_tot = run_n;
        cfg.rough_fraction = run_rf;
        cfg.grid = sqpe::PhaseGrid(run_grid);
        cfg.adaptive = !nonadaptive;
        cfg.seed = run_seed;

        std::optional<sqpe::LikelihoodTable> table;
        sqpe::StageEstimator estimator;
        if (run_engine == "lut") {
            table.emplace(sqpe::build_table(probe, cfg.grid, sqpe::default_quantizer(probe)));
            estimator = [&table](const sqpe::HomodyneBatch& batch) -> sqpe::StageEstimate {
                sqpe::StreamState state(table->grid_points());
                state.update_batch(*table, batch.samples);
                const auto post = sqpe::finalize(state, *table);
                return {post.map_phase, post.variance};
            };
        }

        sqpe::RandomStream stream{cfg.seed, 0};
        const auto rec = cfg.adaptive
                             ? sqpe::run_adaptive(probe, run_phase, cfg, stream, estimator)
                             : sqpe::run_nonadaptive(probe, run_phase, cfg, stream, estimator);

        if (as_json) {
            std::cout << mode_json(rec);
        } else {
            using sqpe::format_double;
            std::cout << "probe: r=" << format_double(probe.r)
                      << " n_th=" << format_double(probe.n_th)
                      << " <n>=" << format_double(sqpe::mean_photons(probe)) << "\n";
            if (cfg.adaptive) {
                std::cout << "rough stage:  M_R=" << rec.m_rough << " at phi*=" << run_phase
                          << " -> MAP " << format_double(rec.rough_estimate) << " (error "
                          << format_double(rec.rough_error) << ")\n"
                          << "feedback:     delta=" << format_double(rec.feedback_shift)
                          << " -> corrected phase " << format_double(rec.corrected_phase) << "\n"
                          << "final stage:  M_F=" << rec.m_final << " -> MAP "
                          << format_double(rec.final_stage_estimate) << "\n";
            } else {
                std::cout << "single stage: N=" << rec.m_final << " at phi*=" << run_phase
                          << " -> MAP " << format_double(rec.final_stage_estimate) << "\n";
            }
            std::cout << "estimate:     " << format_double(rec.final_estimate) << " (error "
                      << format_double(rec.final_error) << ", ppd variance "
                      << format_double(rec.posterior_variance) << ")"
                      << (rec.clamped ? " [clamped]" : "") << "\n";
        }

        if (!dump_samples.empty() || !dump_posterior.empty()) {
            // Rebuild the batches from the stream contract: the rough batch
            // occupies counters [0, 2 M_R), the final batch the next 2 M_F.
            sqpe::RandomStream replay{cfg.seed, 0};
            if (cfg.adaptive) {
                const auto rough =
                    sqpe::sample_homodyne(probe, rec.true_phase, rec.m_rough, replay);
                const auto fin =
                    sqpe::sample_homodyne(probe, rec.corrected_phase, rec.m_final, replay);
                if (!dump_samples.empty()) {
                    sqpe::write_samples(rough, dump_samples + ".rough.txt");
                    sqpe::write_samples(fin, dump_samples + ".final.txt");
                }
                if (!dump_posterior.empty())
                    sqpe::write_posterior_csv(sqpe::posterior(fin, probe, cfg.grid),
                                              dump_posterior);
            } else {
                const auto batch =
                    sqpe::sample_homodyne(probe, rec.true_phase, rec.m_final, replay);
                if (!dump_samples.empty()) sqpe::write_samples(batch, dump_samples + ".txt");
                if (!dump_posterior.empty())
                    sqpe::write_posterior_csv(sqpe::posterior(batch, probe, cfg.grid),
                                              dump_posterior);
            }
        }
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;  // bad arguments are an invalid spec
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid spec: " << e.what() << "\n";
        return 1;
    } catch (const std::domain_error& e) {
        std::cerr << "invalid spec: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "runtime failure: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
