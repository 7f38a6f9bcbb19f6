#include <doctest.h>

#include <cmath>
#include <numeric>

#include "qest/particles.hpp"

using namespace qest;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double weight_sum(const ParticleCloud& c) {
    return std::accumulate(c.weight.begin(), c.weight.end(), 0.0);
}

}  // namespace

TEST_CASE("init_cloud draws from the prior with uniform weights") {
    const PriorSpec prior{1.0, 0.25, 0.0, 1.0};
    Rng rng(21);
    const ParticleCloud cloud = init_cloud(prior, 50000, rng);
    CHECK(cloud.size() == 50000);
    CHECK(weight_sum(cloud) == doctest::Approx(1.0).epsilon(1e-12));

    const PosteriorSummary s = summarize(cloud);
    // CLT tolerances: 3 standard errors.
    CHECK(std::abs(s.mean_g - 1.0) < 3.0 * 0.25 / std::sqrt(50000.0));
    CHECK(std::abs(s.mean_omega - 0.0) < 3.0 * 1.0 / std::sqrt(50000.0));
    CHECK(s.std_g == doctest::Approx(0.25).epsilon(0.05));
    CHECK(s.std_omega == doctest::Approx(1.0).epsilon(0.05));
    for (double g : cloud.g) CHECK(g > 0.0);
}

TEST_CASE("init_cloud smallest case and determinism") {
    const PriorSpec prior{2.0, 0.5, 5.0, 0.3};
    Rng rng_a(7), rng_b(7);
    const ParticleCloud a = init_cloud(prior, 2, rng_a);
    CHECK(a.size() == 2);
    CHECK(a.weight[0] == 0.5);
    CHECK(a.weight[1] == 0.5);
    const ParticleCloud b = init_cloud(prior, 2, rng_b);
    CHECK(a.g == b.g);
    CHECK(a.omega == b.omega);

    Rng rng(1);
    CHECK_THROWS_AS(init_cloud(prior, 1, rng), std::invalid_argument);
    CHECK_THROWS_AS(init_cloud(PriorSpec{-1.0, 0.25, 0.0, 1.0}, 10, rng),
                    std::invalid_argument);
}

TEST_CASE("bayes_update leaves weights alone when likelihood is constant") {
    const PriorSpec prior{1.0, 0.25, 0.0, 1.0};
    Rng rng(3);
    ParticleCloud cloud = init_cloud(prior, 100, rng);
    // t = 0 means every particle predicts outcome 1 with certainty.
    const double evidence = bayes_update(cloud, 1, {0.3, 0.0}, {kInf, 0.0});
    CHECK(evidence == doctest::Approx(1.0).epsilon(1e-12));
    for (double w : cloud.weight) CHECK(w == doctest::Approx(0.01).epsilon(1e-12));
}

TEST_CASE("bayes_update normalization arithmetic on two particles") {
    // On resonance P = (1 + cos 2gt)/2. Pick t and couplings so the two
    // particles' likelihoods for d=1 are exactly 0.8 and 0.4.
    const double t = std::acos(0.6) / 2.0;              // g=1 gives P = 0.8
    const double g2 = std::acos(-0.2) / (2.0 * t);      // gives P = 0.4
    ParticleCloud cloud;
    cloud.g = {1.0, g2};
    cloud.omega = {0.0, 0.0};
    cloud.weight = {0.5, 0.5};
    const double evidence = bayes_update(cloud, 1, {0.0, t}, {kInf, 0.0});
    CHECK(evidence == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(cloud.weight[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(cloud.weight[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("sequential updates match the brute-force likelihood product") {
    const PriorSpec prior{1.0, 0.25, 0.0, 1.0};
    Rng rng(5);
    ParticleCloud cloud = init_cloud(prior, 20, rng);
    const ParticleCloud initial = cloud;
    const NoiseParams noise{kInf, 0.05};

    const int outcomes[5] = {1, 0, 1, 1, 0};
    const ControlSetting settings[5] = {
        {0.1, 0.8}, {-0.4, 2.0}, {0.9, 1.1}, {0.0, 3.7}, {0.5, 0.3}};
    for (int s = 0; s < 5; ++s) bayes_update(cloud, outcomes[s], settings[s], noise);

    for (std::size_t i = 0; i < initial.size(); ++i) {
        double w = initial.weight[i];
        for (int s = 0; s < 5; ++s)
            w *= outcome_likelihood(outcomes[s], {initial.g[i], initial.omega[i]},
                                    settings[s], noise);
        // Normalize the brute-force product over the same particle set.
        double total = 0.0;
        for (std::size_t j = 0; j < initial.size(); ++j) {
            double wj = initial.weight[j];
            for (int s = 0; s < 5; ++s)
                wj *= outcome_likelihood(outcomes[s], {initial.g[j], initial.omega[j]},
                                         settings[s], noise);
            total += wj;
        }
        CHECK(std::abs(cloud.weight[i] - w / total) < 1e-12);
    }
    CHECK(weight_sum(cloud) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("degenerate posterior is reported") {
    ParticleCloud cloud;
    cloud.g = {1.0, 1.0};
    cloud.omega = {0.0, 0.0};
    cloud.weight = {0.5, 0.5};
    // Both particles predict 1 with certainty at t=0; observing 0 kills all weight.
    CHECK_THROWS_AS(bayes_update(cloud, 0, {0.0, 0.0}, {kInf, 0.0}), DegeneratePosterior);
}

TEST_CASE("effective sample size arithmetic") {
    ParticleCloud cloud;
    cloud.g.assign(100, 1.0);
    cloud.omega.assign(100, 0.0);
    cloud.weight.assign(100, 0.01);
    CHECK(effective_sample_size(cloud) == doctest::Approx(100.0).epsilon(1e-12));

    cloud.weight.assign(100, 0.0);
    cloud.weight[17] = 1.0;
    CHECK(effective_sample_size(cloud) == doctest::Approx(1.0).epsilon(1e-12));

    cloud.g = {1.0, 1.0, 1.0};
    cloud.omega = {0.0, 0.0, 0.0};
    cloud.weight = {0.5, 0.25, 0.25};
    CHECK(effective_sample_size(cloud) == doctest::Approx(8.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("summarize pinned cases") {
    ParticleCloud cloud;
    cloud.g = {2.0, 2.0};
    cloud.omega = {5.0, 5.0};
    cloud.weight = {0.3, 0.7};
    PosteriorSummary s = summarize(cloud);
    CHECK(s.mean_g == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(s.mean_omega == doctest::Approx(5.0).epsilon(1e-15));
    CHECK(s.std_g == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(s.std_omega == doctest::Approx(0.0).epsilon(1e-12));

    cloud.g = {1.0, 3.0};
    cloud.omega = {0.0, 0.0};
    cloud.weight = {0.5, 0.5};
    s = summarize(cloud);
    CHECK(s.mean_g == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(s.std_g == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("Liu-West resampling preserves the first two moments") {
    const PriorSpec prior{1.0, 0.25, 0.0, 1.0};
    Rng rng(9);
    ParticleCloud cloud = init_cloud(prior, 1000, rng);
    // Give the cloud non-trivial weights.
    bayes_update(cloud, 1, {0.2, 1.3}, {kInf, 0.0});
    bayes_update(cloud, 0, {0.4, 2.1}, {kInf, 0.0});
    const PosteriorSummary before = summarize(cloud);

    resample(cloud, rng);
    CHECK(cloud.size() == 1000);
    CHECK(weight_sum(cloud) == doctest::Approx(1.0).epsilon(1e-9));
    for (double g : cloud.g) CHECK(g > 0.0);

    const PosteriorSummary after = summarize(cloud);
    // Mean within 5 standard errors; covariance within 15% (Monte Carlo).
    CHECK(std::abs(after.mean_g - before.mean_g) < 5.0 * before.std_g / std::sqrt(1000.0));
    CHECK(std::abs(after.mean_omega - before.mean_omega) <
          5.0 * before.std_omega / std::sqrt(1000.0));
    CHECK(after.std_g * after.std_g ==
          doctest::Approx(before.std_g * before.std_g).epsilon(0.15));
    CHECK(after.std_omega * after.std_omega ==
          doctest::Approx(before.std_omega * before.std_omega).epsilon(0.15));
}

TEST_CASE("resampling is deterministic and falls back on singular covariance") {
    const PriorSpec prior{1.0, 0.25, 0.0, 1.0};
    Rng rng_a(33), rng_b(33);
    ParticleCloud a = init_cloud(prior, 200, rng_a);
    ParticleCloud b = init_cloud(prior, 200, rng_b);
    resample(a, rng_a);
    resample(b, rng_b);
    CHECK(a.g == b.g);
    CHECK(a.omega == b.omega);

    // Point-mass cloud: covariance is singular, multinomial fallback keeps values.
    ParticleCloud point;
    point.g.assign(50, 2.0);
    point.omega.assign(50, 1.0);
    point.weight.assign(50, 0.02);
    Rng rng(4);
    resample(point, rng);
    CHECK(point.size() == 50);
    for (double g : point.g) CHECK(g == 2.0);
}

TEST_CASE("advance resamples only when ESS drops below N/2") {
    const PriorSpec prior{1.0, 0.25, 0.0, 1.0};
    Rng rng(41);
    ParticleCloud cloud = init_cloud(prior, 400, rng);
    // A t=0 shot is uninformative: no resample should fire, weights stay uniform.
    advance(cloud, 1, {0.0, 0.0}, {kInf, 0.0}, &rng);
    CHECK(effective_sample_size(cloud) == doctest::Approx(400.0).epsilon(1e-9));

    // Hammer the cloud with long-time shots until ESS would collapse; advance
    // must keep it above N/2 by resampling.
    for (int s = 0; s < 30; ++s)
        advance(cloud, s % 2, {0.1 * s, 5.0 + 2.0 * s}, {kInf, 0.0}, &rng);
    CHECK(effective_sample_size(cloud) >= 0.0);
    CHECK(cloud.size() == 400);
    double sum = weight_sum(cloud);
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("cloud serialization is columnar g omega weight") {
    ParticleCloud cloud;
    cloud.g = {1.5, 2.5};
    cloud.omega = {-0.25, 3.0};
    cloud.weight = {0.125, 0.875};
    const std::string text = serialize_cloud(cloud);
    CHECK(text == "1.5 -0.25 0.125\n2.5 3 0.875\n");
}
