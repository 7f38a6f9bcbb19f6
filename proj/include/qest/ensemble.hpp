#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "qest/session.hpp"

namespace qest {

// One simulated single-shot measurement on the true system, readout error
// included.
int sample_outcome(const SystemParams& true_params, const ControlSetting& setting,
                   const NoiseParams& noise, Rng& rng);

// Simulated outcome source for a fixed truth; draws from the given stream.
OutcomeSource simulated_oracle(const SystemParams& truth, const NoiseParams& noise, Rng& rng);

struct SquaredErrors {
    double eps2_g;
    double eps2_omega;
};

// Relative squared errors: g against the truth, omega_r against the
// omega_scale (the ensemble's mu_g by default).
SquaredErrors relative_errors(double est_g, double est_omega, const SystemParams& truth,
                              double omega_scale);

struct EnsembleConfig {
    std::size_t n_runs = 200;
    SessionConfig session;
    PriorSpec truth_prior;                 // defaults to session.prior
    bool truth_prior_set = false;
    std::vector<double> thresholds = {1e-10, 1e-7, 1e-4};  // strictly positive, sorted
    std::vector<std::size_t> checkpoints = {150, 300, 600};
    double omega_error_scale = 0.0;        // 0 -> session.prior.mu_g
    std::uint64_t seed = 0;
    std::size_t threads = 1;

    const PriorSpec& truth() const { return truth_prior_set ? truth_prior : session.prior; }
    double omega_scale() const {
        return omega_error_scale > 0.0 ? omega_error_scale : session.prior.mu_g;
    }

    void validate() const;
};

struct OutlierCell {
    double threshold;
    std::size_t shots;
    std::size_t count;
};

struct EnsembleResult {
    // Per-shot-index medians/means of the relative squared errors across runs.
    std::vector<double> median_eps2_g;
    std::vector<double> median_eps2_omega;
    std::vector<double> mean_eps2_g;
    std::vector<double> mean_eps2_omega;
    std::vector<OutlierCell> outliers;     // counts of runs with eps2_g > threshold
    std::vector<SquaredErrors> final_errors;  // one per run, at its final estimate
    std::vector<std::size_t> total_shots;     // one per run
    std::vector<RunStatus> statuses;
    std::size_t n_failed = 0;
    std::size_t n_runs = 0;
};

// Draws a truth per run, runs a session against the simulated oracle, and
// aggregates error statistics. Run r uses the child stream (seed, r), so the
// result is independent of scheduling.
EnsembleResult run_ensemble(const EnsembleConfig& config);

struct ShotsToThreshold {
    double mean_shots = 0.0;
    double median_shots = 0.0;
    double std_error = 0.0;  // standard error of mean_shots across runs
    std::size_t n_capped = 0;  // runs that never reached the target (counted at budget)
    std::size_t n_runs = 0;
};

// First shot index at which each run's eps2_g drops to the target, averaged
// across the ensemble. Runs stop early once the target is met.
ShotsToThreshold shots_to_threshold(const EnsembleConfig& config, double target);

}  // namespace qest
