#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "qest/ensemble.hpp"

using namespace qest;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPi = 3.14159265358979323846;

EnsembleConfig small_ensemble() {
    EnsembleConfig c;
    c.session.prior = {1.0, 0.25, 0.0, 1.0};
    c.session.noise = {kInf, 0.0};
    c.session.n_particles = 800;
    c.session.shots = 60;
    c.n_runs = 20;
    c.checkpoints = {30, 60};
    c.seed = 42;
    return c;
}

}  // namespace

TEST_CASE("sample_outcome pinned cases") {
    Rng rng(1);
    const NoiseParams ideal{kInf, 0.0};
    for (int i = 0; i < 50; ++i) {
        CHECK(sample_outcome({1.0, 0.0}, {0.7, 0.0}, ideal, rng) == 1);
        CHECK(sample_outcome({1.0, 0.0}, {0.0, kPi / 2.0}, ideal, rng) == 0);
    }
    // Quarter swap: empirical mean 0.5 within the binomial CI.
    std::size_t hits = 0;
    const std::size_t n = 10000;
    for (std::size_t i = 0; i < n; ++i)
        hits += sample_outcome({1.0, 0.0}, {0.0, kPi / 4.0}, ideal, rng);
    CHECK(std::abs(static_cast<double>(hits) / n - 0.5) < 0.02);
}

TEST_CASE("simulator frequencies match the model on a fixed grid (chi-square)") {
    // Session loop disabled: raw draws at fixed settings, validated against
    // outcome_likelihood by a chi-square test over all cells.
    Rng rng(77);
    const SystemParams truth{1.0, 0.3};
    const NoiseParams noise{20.0, 0.05};
    const std::size_t n_per_cell = 2000;
    double chi2 = 0.0;
    std::size_t cells = 0;
    for (double omega_q : {-1.0, 0.0, 0.3, 1.2}) {
        for (double t : {0.4, 1.0, 2.5, 6.0}) {
            const double p = outcome_likelihood(1, truth, {omega_q, t}, noise);
            std::size_t hits = 0;
            for (std::size_t i = 0; i < n_per_cell; ++i)
                hits += sample_outcome(truth, {omega_q, t}, noise, rng);
            const double expected = p * n_per_cell;
            const double var = n_per_cell * p * (1.0 - p);
            chi2 += (hits - expected) * (hits - expected) / var;
            ++cells;
        }
    }
    // 16 degrees of freedom; chi-square exceeds 39.25 with p < 0.001.
    CHECK(chi2 < 39.25);
}

TEST_CASE("relative error arithmetic") {
    CHECK(relative_errors(1.0, 0.0, {1.0, 0.0}, 1.0).eps2_g == 0.0);
    CHECK(relative_errors(1.0, 0.0, {1.0, 0.0}, 1.0).eps2_omega == 0.0);
    CHECK(relative_errors(1.1, 0.0, {1.0, 0.0}, 1.0).eps2_g ==
          doctest::Approx(0.01).epsilon(1e-12));
    CHECK(relative_errors(1.0, 0.5, {1.0, 0.0}, 1.0).eps2_omega ==
          doctest::Approx(0.25).epsilon(1e-12));
    // omega errors are normalized by the scale, not the true omega.
    CHECK(relative_errors(1.0, 0.5, {1.0, 0.0}, 2.0).eps2_omega ==
          doctest::Approx(0.0625).epsilon(1e-12));
}

TEST_CASE("single-run ensemble curve equals that run's trace") {
    EnsembleConfig config = small_ensemble();
    config.n_runs = 1;
    const EnsembleResult result = run_ensemble(config);
    REQUIRE(result.median_eps2_g.size() == config.session.shots);
    CHECK(result.median_eps2_g == result.mean_eps2_g);
    CHECK(result.median_eps2_omega == result.mean_eps2_omega);
    CHECK(result.n_failed == 0);
}

TEST_CASE("ensemble determinism and error decay") {
    const EnsembleConfig config = small_ensemble();
    const EnsembleResult a = run_ensemble(config);
    const EnsembleResult b = run_ensemble(config);
    CHECK(a.median_eps2_g == b.median_eps2_g);
    CHECK(a.mean_eps2_omega == b.mean_eps2_omega);
    // Learning happened: median error at the end well below the start.
    CHECK(a.median_eps2_g.back() < 0.01 * a.median_eps2_g.front());
}

TEST_CASE("outlier counts are consistent with thresholds") {
    EnsembleConfig config = small_ensemble();
    config.thresholds = {1e-12, 1e-2, 1.0};
    const EnsembleResult result = run_ensemble(config);
    // Counts at a fixed checkpoint are non-increasing in the threshold.
    for (std::size_t c = 0; c < config.checkpoints.size(); ++c) {
        const std::size_t tight = result.outliers[c].count;
        const std::size_t mid = result.outliers[config.checkpoints.size() + c].count;
        const std::size_t loose = result.outliers[2 * config.checkpoints.size() + c].count;
        CHECK(tight >= mid);
        CHECK(mid >= loose);
    }
}

TEST_CASE("shots_to_threshold meets trivial and early-stop expectations") {
    EnsembleConfig config = small_ensemble();
    config.n_runs = 10;
    // Target far above the prior variance: met essentially immediately.
    const ShotsToThreshold loose = shots_to_threshold(config, 100.0);
    CHECK(loose.mean_shots <= 2.0);
    CHECK(loose.n_capped == 0);

    const ShotsToThreshold tight = shots_to_threshold(config, 1e-3);
    CHECK(tight.mean_shots > loose.mean_shots);
    CHECK(tight.mean_shots <= config.session.shots);
}

TEST_CASE("chevron visibility peaks at zero detuning") {
    // Oscillation visibility 4g^2/omega_R^2 must order down with |detuning|.
    const SystemParams truth{1.0, 0.0};
    const NoiseParams ideal{kInf, 0.0};
    double prev_visibility = 2.0;
    for (double abs_delta : {0.0, 0.5, 1.0, 2.0, 3.0}) {
        double lo = 1.0, hi = 0.0;
        for (int i = 0; i <= 400; ++i) {
            const double t = 8.0 * i / 400.0;
            const double p = excitation_probability(truth, {abs_delta, t});
            lo = std::min(lo, p);
            hi = std::max(hi, p);
        }
        const double visibility = hi - lo;
        CHECK(visibility < prev_visibility);
        prev_visibility = visibility;
        if (abs_delta == 0.0) CHECK(visibility == doctest::Approx(1.0).epsilon(1e-3));
    }
}
