#include "qest/session.hpp"

#include <cmath>

namespace qest {

std::string to_string(RunStatus status, std::size_t restarts) {
    switch (status) {
        case RunStatus::kConverged: return "converged";
        case RunStatus::kAcceptedAfterVerify:
            return restarts == 0 ? "accepted-after-verify"
                                 : "restarted-" + std::to_string(restarts) + "-times";
        case RunStatus::kFailed: return "failed";
        case RunStatus::kBudgetExhausted: return "budget-exhausted";
        case RunStatus::kTargetReached: return "target-reached";
    }
    return "unknown";
}

namespace {

enum class PhaseEnd { kBudget, kCollapsed, kDegenerate, kEarlyStop };

// Runs n_shots of the measure-update-adapt loop on an existing cloud. The
// warm-up index starts at 1 so every fresh prior gets its warm-up. Appends
// to record.shots and bumps record.total_shots per oracle query.
PhaseEnd run_phase(ParticleCloud& cloud, const SessionConfig& config,
                   const OutcomeSource& oracle, Rng& rng, std::size_t n_shots,
                   RunRecord& record,
                   const std::function<bool(const ShotRecord&)>& early_stop) {
    const std::size_t k = config.strategy.shots_per_setting;
    ControlSetting setting;
    for (std::size_t m = 1; m <= n_shots; ++m) {
        if ((m - 1) % k == 0) {
            try {
                setting = next_setting(summarize(cloud), m, config.strategy, rng);
            } catch (const PosteriorCollapsed&) {
                return PhaseEnd::kCollapsed;
            }
        }
        const int outcome = oracle(setting);
        ++record.total_shots;
        try {
            advance(cloud, outcome, setting, config.noise, &rng);
        } catch (const DegeneratePosterior&) {
            return PhaseEnd::kDegenerate;
        }
        const PosteriorSummary s = summarize(cloud);
        record.shots.push_back({record.total_shots, setting.omega_q, setting.t, outcome,
                                s.mean_g, s.std_g, s.mean_omega, s.std_omega});
        record.est_g = s.mean_g;
        record.est_omega = s.mean_omega;
        if (early_stop && early_stop(record.shots.back())) return PhaseEnd::kEarlyStop;
    }
    return PhaseEnd::kBudget;
}

RunRecord run_plain(const SessionConfig& config, const OutcomeSource& oracle, Rng& rng,
                    const std::function<bool(const ShotRecord&)>& early_stop) {
    RunRecord record;
    ParticleCloud cloud = init_cloud(config.prior, config.n_particles, rng);
    switch (run_phase(cloud, config, oracle, rng, config.shots, record, early_stop)) {
        case PhaseEnd::kBudget: record.status = RunStatus::kBudgetExhausted; break;
        case PhaseEnd::kCollapsed: record.status = RunStatus::kConverged; break;
        case PhaseEnd::kDegenerate: record.status = RunStatus::kFailed; break;
        case PhaseEnd::kEarlyStop: record.status = RunStatus::kTargetReached; break;
    }
    record.final_cloud = std::move(cloud);
    return record;
}

RunRecord run_protocol(const SessionConfig& config, const OutcomeSource& oracle, Rng& rng) {
    RunRecord record;
    PriorSpec phase_prior = config.prior;
    while (true) {
        ParticleCloud cloud = init_cloud(phase_prior, config.n_particles, rng);
        PhaseEnd end = run_phase(cloud, config, oracle, rng, config.checkpoint_shots,
                                 record, {});
        bool restart = false;
        if (end == PhaseEnd::kDegenerate) {
            restart = true;
        } else if (end == PhaseEnd::kCollapsed) {
            record.status = RunStatus::kConverged;
            record.final_cloud = std::move(cloud);
            return record;
        } else {
            const PosteriorSummary e1 = summarize(cloud);
            // Verify phase: fresh prior with the ORIGINAL widths, centered
            // on the checkpoint estimate.
            const PriorSpec verify_prior =
                config.prior.recentered(e1.mean_g, e1.mean_omega);
            cloud = init_cloud(verify_prior, config.n_particles, rng);
            end = run_phase(cloud, config, oracle, rng, config.verify_shots, record, {});
            if (end == PhaseEnd::kDegenerate) {
                restart = true;
            } else if (end == PhaseEnd::kCollapsed) {
                record.status = RunStatus::kConverged;
                record.final_cloud = std::move(cloud);
                return record;
            } else {
                const PosteriorSummary e2 = summarize(cloud);
                const double dg = std::abs(e2.mean_g - e1.mean_g) / e1.mean_g;
                const double domega =
                    std::abs(e2.mean_omega - e1.mean_omega) / config.prior.mu_g;
                record.est_g = e2.mean_g;
                record.est_omega = e2.mean_omega;
                if (dg < config.agreement_threshold && domega < config.agreement_threshold) {
                    record.status = RunStatus::kAcceptedAfterVerify;
                    record.final_cloud = std::move(cloud);
                    return record;
                }
                restart = true;
            }
        }
        if (restart) {
            if (record.restarts >= config.max_restarts) {
                record.status = RunStatus::kFailed;
                record.final_cloud = std::move(cloud);
                return record;
            }
            ++record.restarts;
            // New search: prior mean drawn from the ORIGINAL prior, widths kept.
            const double g_new = config.prior.sample_g(rng);
            const double omega_new = config.prior.sample_omega(rng);
            phase_prior = config.prior.recentered(g_new, omega_new);
        }
    }
}

}  // namespace

RunRecord run_estimation(const SessionConfig& config, const OutcomeSource& oracle, Rng& rng,
                         const std::function<bool(const ShotRecord&)>& early_stop) {
    config.validate();
    return config.restart_protocol ? run_protocol(config, oracle, rng)
                                   : run_plain(config, oracle, rng, early_stop);
}

}  // namespace qest
