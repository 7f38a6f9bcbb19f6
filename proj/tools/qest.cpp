// qest: adaptive Bayesian estimation of a qubit-resonator coupling (g) and
// resonator frequency (omega_r) from single-shot measurements, with ensemble
// benchmarks and a swap-spectroscopy baseline.
//
// Modes:
//   run       one estimation session -> run.json + shots.csv
//   ensemble  many simulated sessions -> error_curve.csv/.json + outliers.csv
//   sweep     shots-to-target along a noise/prior axis -> sweep.csv
//   baseline  acquire a spectroscopy grid and ML-fit it -> grid.csv + fit.json
//   spectrum  analytic probability over a grid, no sampling -> spectrum.csv

#include <exception>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qest/config.hpp"
#include "qest/io.hpp"

namespace {

constexpr int kExitConfigError = 3;
constexpr int kExitIoError = 4;

struct CliOptions {
    std::string mode;
    std::string config_path;
    std::string out_dir = ".";
    std::vector<std::string> overrides;
    bool dump_posterior = false;
    bool paper_scale = false;
};

qest::KeyValueConfig load_config(const CliOptions& opts) {
    qest::KeyValueConfig cfg;
    if (!opts.config_path.empty()) cfg.load_file(opts.config_path);
    if (opts.paper_scale) {
        cfg.set("ensemble.n_runs", "10000");
        cfg.set("session.n_particles", "50000");
    }
    for (const std::string& kv : opts.overrides) cfg.parse_line(kv);
    qest::reject_unknown_keys(cfg);
    return cfg;
}

std::string out_path(const CliOptions& opts, const std::string& name) {
    return (std::filesystem::path(opts.out_dir) / name).string();
}

void write_bundle_config(const CliOptions& opts, const qest::KeyValueConfig& cfg) {
    qest::write_text_file(out_path(opts, "config_resolved.txt"), cfg.resolved_text());
}

int mode_run(const CliOptions& opts, qest::KeyValueConfig& cfg) {
    const qest::SessionConfig session = qest::build_session_config(cfg);
    qest::Rng rng = qest::Rng::child(session.seed, 0);
    const qest::SystemParams truth{session.prior.sample_g(rng),
                                   session.prior.sample_omega(rng)};
    const qest::OutcomeSource oracle = qest::simulated_oracle(truth, session.noise, rng);
    const qest::RunRecord record = qest::run_estimation(session, oracle, rng);
    write_bundle_config(opts, cfg);
    nlohmann::ordered_json j = nlohmann::ordered_json::parse(
        qest::run_record_json(record, cfg.resolved_text()));
    j["truth"]["g"] = truth.g;
    j["truth"]["omega_r"] = truth.omega_r;
    qest::write_text_file(out_path(opts, "run.json"), j.dump(2) + "\n");
    qest::write_text_file(out_path(opts, "shots.csv"), qest::shot_csv(record));
    if (opts.dump_posterior)
        qest::write_text_file(out_path(opts, "posterior.txt"),
                              qest::serialize_cloud(record.final_cloud));
    return 0;
}

int mode_ensemble(const CliOptions& opts, qest::KeyValueConfig& cfg) {
    const qest::EnsembleConfig config = qest::build_ensemble_config(cfg);
    const qest::EnsembleResult result = qest::run_ensemble(config);
    write_bundle_config(opts, cfg);
    qest::write_text_file(out_path(opts, "error_curve.csv"), qest::error_curve_csv(result));
    qest::write_text_file(out_path(opts, "error_curve.json"),
                          qest::ensemble_json(result, cfg.resolved_text()));
    qest::write_text_file(out_path(opts, "outliers.csv"), qest::outlier_table_csv(result));
    return 0;
}

int mode_sweep(const CliOptions& opts, qest::KeyValueConfig& cfg) {
    const std::string axis = cfg.get_string("sweep.axis", "p_e");
    const std::vector<double> values = cfg.get_double_list("sweep.values", {0.0, 0.05, 0.1});
    const double target = cfg.get_double("ensemble.target", 1e-4);
    std::vector<qest::SweepRow> rows;
    for (double value : values) {
        qest::KeyValueConfig point = cfg;
        if (axis == "p_e") point.set("noise.p_e", qest::format_number(value));
        else if (axis == "t1") point.set("noise.t1", qest::format_number(value));
        else if (axis == "sigma_g") point.set("prior.sigma_g", qest::format_number(value));
        else if (axis == "sigma_omega")
            point.set("prior.sigma_omega", qest::format_number(value));
        else throw std::invalid_argument("sweep.axis must be p_e|t1|sigma_g|sigma_omega");
        const qest::EnsembleConfig config = qest::build_ensemble_config(point);
        rows.push_back({axis, value, qest::shots_to_threshold(config, target)});
    }
    write_bundle_config(opts, cfg);
    qest::write_text_file(out_path(opts, "sweep.csv"), qest::sweep_csv(rows));
    return 0;
}

int mode_baseline(const CliOptions& opts, qest::KeyValueConfig& cfg) {
    const qest::SessionConfig session = qest::build_session_config(cfg);
    const qest::GridSpec grid = build_grid_spec(cfg);
    const qest::SystemParams truth = qest::build_truth_params(cfg);
    const bool exact = cfg.get_bool("grid.exact", false);
    qest::Rng rng = qest::Rng::child(session.seed, 0);
    const qest::SpectroscopyData data =
        exact ? qest::acquire_grid_exact(truth, grid, session.noise)
              : qest::acquire_grid(truth, grid, session.noise, rng);
    const qest::FitResult fit = qest::fit_grid(data, grid, session.noise, session.prior);
    write_bundle_config(opts, cfg);
    qest::write_text_file(out_path(opts, "grid.csv"), qest::grid_csv(data, grid));
    nlohmann::ordered_json j;
    j["ok"] = fit.ok;
    j["at_boundary"] = fit.at_boundary;
    j["estimate"]["g"] = fit.g;
    j["estimate"]["omega_r"] = fit.omega_r;
    j["log_likelihood"] = fit.log_likelihood;
    j["truth"]["g"] = truth.g;
    j["truth"]["omega_r"] = truth.omega_r;
    j["total_shots"] = grid.size() * grid.m_r;
    j["config"] = cfg.resolved_text();
    qest::write_text_file(out_path(opts, "fit.json"), j.dump(2) + "\n");
    return fit.ok ? 0 : kExitConfigError;
}

int mode_spectrum(const CliOptions& opts, qest::KeyValueConfig& cfg) {
    const qest::SessionConfig session = qest::build_session_config(cfg);
    const qest::GridSpec grid = build_grid_spec(cfg);
    const qest::SystemParams truth = qest::build_truth_params(cfg);
    const qest::SpectroscopyData data = qest::acquire_grid_exact(truth, grid, session.noise);
    write_bundle_config(opts, cfg);
    qest::write_text_file(out_path(opts, "spectrum.csv"), qest::grid_csv(data, grid));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Adaptive Bayesian qubit-resonator (g, omega_r) estimation"};
    CliOptions opts;
    std::string seed_flag, shots_flag, particles_flag, nruns_flag, threads_flag;
    app.add_option("--mode", opts.mode, "run | ensemble | sweep | baseline | spectrum")
        ->required()
        ->check(CLI::IsMember({"run", "ensemble", "sweep", "baseline", "spectrum"}));
    app.add_option("--config", opts.config_path, "key=value configuration file");
    app.add_option("--out", opts.out_dir, "output directory (default: .)");
    app.add_option("--seed", seed_flag, "master seed (overrides config)");
    app.add_option("--shots", shots_flag, "shot budget per session");
    app.add_option("--particles", particles_flag, "particle count");
    app.add_option("--n-runs", nruns_flag, "ensemble run count");
    app.add_option("--threads", threads_flag, "worker threads (1 = bit-exact sequential)");
    app.add_option("--set", opts.overrides, "override any config key, e.g. strategy.a=1.57")
        ->take_all();
    app.add_flag("--dump-posterior", opts.dump_posterior, "write the final particle cloud");
    app.add_flag("--paper-scale", opts.paper_scale, "10 000 runs x 50 000 particles");
    CLI11_PARSE(app, argc, argv);

    try {
        qest::KeyValueConfig cfg = load_config(opts);
        if (!seed_flag.empty()) cfg.set("seed", seed_flag);
        if (!shots_flag.empty()) cfg.set("session.shots", shots_flag);
        if (!particles_flag.empty()) cfg.set("session.n_particles", particles_flag);
        if (!nruns_flag.empty()) cfg.set("ensemble.n_runs", nruns_flag);
        if (!threads_flag.empty()) cfg.set("threads", threads_flag);

        std::error_code ec;
        std::filesystem::create_directories(opts.out_dir, ec);
        if (ec) {
            std::cerr << "error: cannot create output directory '" << opts.out_dir << "'\n";
            return kExitIoError;
        }

        if (opts.mode == "run") return mode_run(opts, cfg);
        if (opts.mode == "ensemble") return mode_ensemble(opts, cfg);
        if (opts.mode == "sweep") return mode_sweep(opts, cfg);
        if (opts.mode == "baseline") return mode_baseline(opts, cfg);
        if (opts.mode == "spectrum") return mode_spectrum(opts, cfg);
        std::cerr << "error: unknown mode '" << opts.mode << "'\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitIoError;
    }
}
