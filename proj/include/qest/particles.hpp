#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "qest/physics.hpp"
#include "qest/prior.hpp"
#include "qest/rng.hpp"

namespace qest {

// Weight sum collapsed to zero during a Bayes update; the posterior carries
// no information and the session must restart.
struct DegeneratePosterior : std::runtime_error {
    DegeneratePosterior() : std::runtime_error("posterior weights underflowed to zero") {}
};

struct PosteriorSummary {
    double mean_g = 0.0;
    double mean_omega = 0.0;
    double std_g = 0.0;
    double std_omega = 0.0;
    double cov_g_omega = 0.0;  // off-diagonal of the 2x2 weighted covariance
    double ess = 0.0;
};

// Weighted (g, omega_r) hypotheses approximating the posterior. Stored as
// parallel arrays; weights sum to 1 after every public operation.
class ParticleCloud {
  public:
    std::vector<double> g;
    std::vector<double> omega;
    std::vector<double> weight;

    std::size_t size() const { return g.size(); }
};

ParticleCloud init_cloud(const PriorSpec& prior, std::size_t n_particles, Rng& rng);

// Multiplies each weight by the outcome likelihood and renormalizes.
// Returns the pre-normalization weight sum, i.e. the evidence P(d).
// Throws DegeneratePosterior if the sum underflows to zero.
double bayes_update(ParticleCloud& cloud, int d, const ControlSetting& setting,
                    const NoiseParams& noise);

double effective_sample_size(const ParticleCloud& cloud);

// Liu-West resampling: ancestors chosen with probability w_i, shrunk toward
// the weighted mean with a = 0.98 and jittered with covariance (1 - a^2) Sigma.
// Nonpositive g proposals are re-drawn. Falls back to plain multinomial
// resampling when the covariance is singular. Weights come out uniform.
void resample(ParticleCloud& cloud, Rng& rng);

PosteriorSummary summarize(const ParticleCloud& cloud);

// Runs bayes_update and resamples when ess < N/2 (skipped when rng is null).
// Returns the evidence.
double advance(ParticleCloud& cloud, int d, const ControlSetting& setting,
               const NoiseParams& noise, Rng* rng);

// Columnar text snapshot: one "g omega_r weight" row per particle.
std::string serialize_cloud(const ParticleCloud& cloud);

}  // namespace qest
