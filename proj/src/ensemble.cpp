#include "qest/ensemble.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace qest {

int sample_outcome(const SystemParams& true_params, const ControlSetting& setting,
                   const NoiseParams& noise, Rng& rng) {
    return rng.bernoulli(outcome_likelihood(1, true_params, setting, noise)) ? 1 : 0;
}

OutcomeSource simulated_oracle(const SystemParams& truth, const NoiseParams& noise, Rng& rng) {
    return [truth, noise, &rng](const ControlSetting& setting) {
        return sample_outcome(truth, setting, noise, rng);
    };
}

SquaredErrors relative_errors(double est_g, double est_omega, const SystemParams& truth,
                              double omega_scale) {
    const double eg = (est_g - truth.g) / truth.g;
    const double eo = (est_omega - truth.omega_r) / omega_scale;
    return {eg * eg, eo * eo};
}

void EnsembleConfig::validate() const {
    session.validate();
    if (truth_prior_set) truth_prior.validate();
    if (n_runs < 1) throw std::invalid_argument("EnsembleConfig: n_runs >= 1");
    for (std::size_t i = 0; i < thresholds.size(); ++i) {
        if (!(thresholds[i] > 0.0) || (i > 0 && thresholds[i] <= thresholds[i - 1]))
            throw std::invalid_argument(
                "EnsembleConfig: thresholds must be positive and strictly increasing");
    }
}

namespace {

double median_of(std::vector<double> v) {
    if (v.empty()) return 0.0;
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + mid, v.end());
    double m = v[mid];
    if (v.size() % 2 == 0) {
        m = 0.5 * (m + *std::max_element(v.begin(), v.begin() + mid));
    }
    return m;
}

struct RunTrace {
    std::vector<SquaredErrors> per_shot;  // error of the running estimate
    SquaredErrors final_error{0.0, 0.0};
    std::size_t total_shots = 0;
    RunStatus status = RunStatus::kFailed;
    std::size_t first_hit = 0;  // earliest shot with eps2_g <= target (0 = never)
};

RunTrace simulate_one(const EnsembleConfig& config, std::size_t run_index,
                      double early_stop_target) {
    Rng rng = Rng::child(config.seed, run_index);
    const PriorSpec& truth_prior = config.truth();
    SystemParams truth{truth_prior.sample_g(rng), truth_prior.sample_omega(rng)};
    const double scale = config.omega_scale();

    std::function<bool(const ShotRecord&)> early_stop;
    if (early_stop_target > 0.0) {
        early_stop = [&truth, scale, early_stop_target](const ShotRecord& s) {
            return relative_errors(s.mean_g, s.mean_omega, truth, scale).eps2_g <=
                   early_stop_target;
        };
    }

    RunTrace trace;
    const OutcomeSource oracle = simulated_oracle(truth, config.session.noise, rng);
    const RunRecord record = run_estimation(config.session, oracle, rng, early_stop);
    trace.per_shot.reserve(record.shots.size());
    for (const ShotRecord& s : record.shots) {
        const SquaredErrors e = relative_errors(s.mean_g, s.mean_omega, truth, scale);
        trace.per_shot.push_back(e);
        if (trace.first_hit == 0 && e.eps2_g <= early_stop_target && early_stop_target > 0.0)
            trace.first_hit = trace.per_shot.size();
    }
    trace.final_error = relative_errors(record.est_g, record.est_omega, truth, scale);
    trace.total_shots = record.total_shots;
    trace.status = record.status;
    return trace;
}

std::vector<RunTrace> simulate_all(const EnsembleConfig& config, double early_stop_target) {
    std::vector<RunTrace> traces(config.n_runs);
    const std::size_t n_threads = std::max<std::size_t>(1, config.threads);
    if (n_threads == 1) {
        for (std::size_t r = 0; r < config.n_runs; ++r)
            traces[r] = simulate_one(config, r, early_stop_target);
    } else {
        std::vector<std::thread> workers;
        std::atomic<std::size_t> next{0};
        for (std::size_t w = 0; w < n_threads; ++w) {
            workers.emplace_back([&] {
                for (std::size_t r = next.fetch_add(1); r < config.n_runs;
                     r = next.fetch_add(1))
                    traces[r] = simulate_one(config, r, early_stop_target);
            });
        }
        for (auto& t : workers) t.join();
    }
    return traces;
}

}  // namespace

EnsembleResult run_ensemble(const EnsembleConfig& config) {
    config.validate();
    const std::vector<RunTrace> traces = simulate_all(config, 0.0);

    EnsembleResult result;
    result.n_runs = config.n_runs;
    // Aggregate over the common trace length (protocol runs with restarts
    // have longer logs; their tails are not comparable across runs).
    std::size_t curve_len = config.session.restart_protocol
                                ? config.session.checkpoint_shots + config.session.verify_shots
                                : config.session.shots;
    for (const RunTrace& t : traces) curve_len = std::min(curve_len, t.per_shot.size());

    std::vector<double> column(traces.size());
    for (std::size_t s = 0; s < curve_len; ++s) {
        double sum_g = 0.0, sum_o = 0.0;
        std::vector<double> col_g(traces.size()), col_o(traces.size());
        for (std::size_t r = 0; r < traces.size(); ++r) {
            col_g[r] = traces[r].per_shot[s].eps2_g;
            col_o[r] = traces[r].per_shot[s].eps2_omega;
            sum_g += col_g[r];
            sum_o += col_o[r];
        }
        result.median_eps2_g.push_back(median_of(std::move(col_g)));
        result.median_eps2_omega.push_back(median_of(std::move(col_o)));
        result.mean_eps2_g.push_back(sum_g / static_cast<double>(traces.size()));
        result.mean_eps2_omega.push_back(sum_o / static_cast<double>(traces.size()));
    }

    for (double threshold : config.thresholds) {
        for (std::size_t checkpoint : config.checkpoints) {
            OutlierCell cell{threshold, checkpoint, 0};
            for (const RunTrace& t : traces) {
                // Error at the checkpoint within the run's own log; final
                // estimate if the run ended (or stopped early) before it.
                const SquaredErrors e = checkpoint <= t.per_shot.size()
                                            ? t.per_shot[checkpoint - 1]
                                            : t.final_error;
                if (e.eps2_g > threshold) ++cell.count;
            }
            result.outliers.push_back(cell);
        }
    }

    for (const RunTrace& t : traces) {
        result.final_errors.push_back(t.final_error);
        result.total_shots.push_back(t.total_shots);
        result.statuses.push_back(t.status);
        if (t.status == RunStatus::kFailed) ++result.n_failed;
    }
    return result;
}

ShotsToThreshold shots_to_threshold(const EnsembleConfig& config, double target) {
    config.validate();
    if (!(target > 0.0)) throw std::invalid_argument("shots_to_threshold: target > 0");
    const std::vector<RunTrace> traces = simulate_all(config, target);

    ShotsToThreshold out;
    out.n_runs = config.n_runs;
    std::vector<double> shots;
    shots.reserve(traces.size());
    const double budget = static_cast<double>(config.session.shots);
    for (const RunTrace& t : traces) {
        if (t.first_hit > 0) {
            shots.push_back(static_cast<double>(t.first_hit));
        } else {
            shots.push_back(budget);
            ++out.n_capped;
        }
    }
    double sum = 0.0;
    for (double s : shots) sum += s;
    out.mean_shots = sum / static_cast<double>(shots.size());
    double var = 0.0;
    for (double s : shots) var += (s - out.mean_shots) * (s - out.mean_shots);
    if (shots.size() > 1)
        out.std_error = std::sqrt(var / static_cast<double>(shots.size() - 1)) /
                        std::sqrt(static_cast<double>(shots.size()));
    out.median_shots = median_of(std::move(shots));
    return out;
}

}  // namespace qest
