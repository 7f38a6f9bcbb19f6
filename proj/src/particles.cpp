#include "qest/particles.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace qest {

ParticleCloud init_cloud(const PriorSpec& prior, std::size_t n_particles, Rng& rng) {
    prior.validate();
    if (n_particles < 2)
        throw std::invalid_argument("init_cloud: need at least 2 particles");
    ParticleCloud cloud;
    cloud.g.resize(n_particles);
    cloud.omega.resize(n_particles);
    cloud.weight.assign(n_particles, 1.0 / static_cast<double>(n_particles));
    const double mu_ln = prior.log_mu();
    const double sigma_ln = prior.log_sigma();
    for (std::size_t i = 0; i < n_particles; ++i) {
        cloud.g[i] = std::exp(mu_ln + sigma_ln * rng.normal());
        cloud.omega[i] = prior.mu_omega + prior.sigma_omega * rng.normal();
    }
    return cloud;
}

double bayes_update(ParticleCloud& cloud, int d, const ControlSetting& setting,
                    const NoiseParams& noise) {
    const std::size_t n = cloud.size();
    const double pe = noise.p_e;
    const double omega_q = setting.omega_q;
    const double t = setting.t;
    double sum = 0.0;
    if (noise.t1_infinite()) {
        for (std::size_t i = 0; i < n; ++i) {
            const double gi = cloud.g[i];
            const double delta = omega_q - cloud.omega[i];
            const double wr2 = delta * delta + 4.0 * gi * gi;
            const double p = 0.5 * (4.0 * gi * gi / wr2 * std::cos(std::sqrt(wr2) * t) +
                                    1.0 + delta * delta / wr2);
            const double p1 = p * (1.0 - pe) + (1.0 - p) * pe;
            const double lik = d == 1 ? p1 : 1.0 - p1;
            cloud.weight[i] *= lik;
            sum += cloud.weight[i];
        }
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            const double p = excitation_probability_damped({cloud.g[i], cloud.omega[i]},
                                                           setting, noise);
            const double p1 = p * (1.0 - pe) + (1.0 - p) * pe;
            const double lik = d == 1 ? p1 : 1.0 - p1;
            cloud.weight[i] *= lik;
            sum += cloud.weight[i];
        }
    }
    if (!(sum > 0.0)) throw DegeneratePosterior();
    const double inv = 1.0 / sum;
    for (double& w : cloud.weight) w *= inv;
    return sum;
}

double effective_sample_size(const ParticleCloud& cloud) {
    double s2 = 0.0;
    for (double w : cloud.weight) s2 += w * w;
    return 1.0 / s2;
}

PosteriorSummary summarize(const ParticleCloud& cloud) {
    const std::size_t n = cloud.size();
    double mg = 0.0, mo = 0.0, s2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mg += cloud.weight[i] * cloud.g[i];
        mo += cloud.weight[i] * cloud.omega[i];
        s2 += cloud.weight[i] * cloud.weight[i];
    }
    double vgg = 0.0, voo = 0.0, vgo = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dg = cloud.g[i] - mg;
        const double dO = cloud.omega[i] - mo;
        vgg += cloud.weight[i] * dg * dg;
        voo += cloud.weight[i] * dO * dO;
        vgo += cloud.weight[i] * dg * dO;
    }
    PosteriorSummary s;
    s.mean_g = mg;
    s.mean_omega = mo;
    s.std_g = std::sqrt(std::max(vgg, 0.0));
    s.std_omega = std::sqrt(std::max(voo, 0.0));
    s.cov_g_omega = vgo;
    s.ess = 1.0 / s2;
    return s;
}

namespace {

// Ancestor index for a uniform draw u against the cumulative weights.
std::size_t pick_ancestor(const std::vector<double>& cdf, double u) {
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    if (it == cdf.end()) --it;
    return static_cast<std::size_t>(it - cdf.begin());
}

}  // namespace

void resample(ParticleCloud& cloud, Rng& rng) {
    const std::size_t n = cloud.size();
    const PosteriorSummary s = summarize(cloud);
    const double vgg = s.std_g * s.std_g;
    const double voo = s.std_omega * s.std_omega;
    const double vgo = s.cov_g_omega;

    std::vector<double> cdf(n);
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        acc += cloud.weight[i];
        cdf[i] = acc;
    }
    cdf.back() = 1.0;

    // Cholesky factor of h^2 Sigma, h^2 = 1 - a^2. det <= 0 means the cloud
    // has collapsed to a line or point; jittering is then ill-defined.
    constexpr double kShrink = 0.98;
    const double h2 = 1.0 - kShrink * kShrink;
    const double det = vgg * voo - vgo * vgo;
    const bool movable = vgg > 0.0 && det > 0.0;
    double l11 = 0.0, l21 = 0.0, l22 = 0.0;
    if (movable) {
        l11 = std::sqrt(h2 * vgg);
        l21 = h2 * vgo / l11;
        l22 = std::sqrt(std::max(h2 * voo - l21 * l21, 0.0));
    }

    std::vector<double> new_g(n), new_omega(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t a = pick_ancestor(cdf, rng.uniform01());
        if (!movable) {
            new_g[i] = cloud.g[a];
            new_omega[i] = cloud.omega[a];
            continue;
        }
        const double cg = kShrink * cloud.g[a] + (1.0 - kShrink) * s.mean_g;
        const double co = kShrink * cloud.omega[a] + (1.0 - kShrink) * s.mean_omega;
        double gi, oi;
        do {
            const double z1 = rng.normal();
            const double z2 = rng.normal();
            gi = cg + l11 * z1;
            oi = co + l21 * z1 + l22 * z2;
        } while (!(gi > 0.0));
        new_g[i] = gi;
        new_omega[i] = oi;
    }
    cloud.g = std::move(new_g);
    cloud.omega = std::move(new_omega);
    cloud.weight.assign(n, 1.0 / static_cast<double>(n));
}

double advance(ParticleCloud& cloud, int d, const ControlSetting& setting,
               const NoiseParams& noise, Rng* rng) {
    const double evidence = bayes_update(cloud, d, setting, noise);
    if (rng != nullptr &&
        effective_sample_size(cloud) < 0.5 * static_cast<double>(cloud.size()))
        resample(cloud, *rng);
    return evidence;
}

std::string serialize_cloud(const ParticleCloud& cloud) {
    std::string out;
    out.reserve(cloud.size() * 64);
    char buf[96];
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g %.17g %.17g\n", cloud.g[i], cloud.omega[i],
                      cloud.weight[i]);
        out += buf;
    }
    return out;
}

}  // namespace qest
