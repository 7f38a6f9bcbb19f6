#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "qest/particles.hpp"
#include "qest/prior.hpp"
#include "qest/strategy.hpp"

namespace qest {

// Answers a single-shot query: given a measurement setting, return the
// reported bit. The seam where a lab client (or the simulator) plugs in.
using OutcomeSource = std::function<int(const ControlSetting&)>;

struct SessionConfig {
    PriorSpec prior;
    NoiseParams noise;
    StrategyParams strategy;
    std::size_t n_particles = 5000;
    std::size_t shots = 600;              // budget for plain (non-protocol) runs
    bool restart_protocol = false;
    std::size_t checkpoint_shots = 300;
    std::size_t verify_shots = 300;
    double agreement_threshold = 1e-2;
    std::size_t max_restarts = 10;
    std::uint64_t seed = 0;

    void validate() const {
        prior.validate();
        noise.validate();
        strategy.validate();
        if (n_particles < 2 || checkpoint_shots < 1 || verify_shots < 1 ||
            !(agreement_threshold > 0.0))
            throw std::invalid_argument("SessionConfig: invalid shot counts or threshold");
    }
};

struct ShotRecord {
    std::size_t shot;  // 1-based, global across phases and restarts
    double omega_q;
    double t;
    int outcome;
    double mean_g;
    double std_g;
    double mean_omega;
    double std_omega;
};

enum class RunStatus {
    kConverged,           // posterior collapsed before the budget ran out
    kAcceptedAfterVerify, // protocol agreement test passed
    kFailed,              // max_restarts exhausted or unrecoverable degeneracy
    kBudgetExhausted,     // plain run used its full budget
    kTargetReached,       // plain run stopped by the early-stop predicate
};

std::string to_string(RunStatus status, std::size_t restarts);

struct RunRecord {
    std::vector<ShotRecord> shots;
    double est_g = 0.0;
    double est_omega = 0.0;
    std::size_t restarts = 0;
    std::size_t total_shots = 0;
    RunStatus status = RunStatus::kBudgetExhausted;
    ParticleCloud final_cloud;  // posterior at termination
};

// One full estimation run: the measure-update-adapt loop, plus the
// checkpoint/verify/restart protocol when config.restart_protocol is set.
// The optional early_stop predicate is checked after every shot of a plain
// run (ignored in protocol mode).
RunRecord run_estimation(const SessionConfig& config, const OutcomeSource& oracle, Rng& rng,
                         const std::function<bool(const ShotRecord&)>& early_stop = {});

}  // namespace qest
