#pragma once

#include <cmath>
#include <stdexcept>

#include "qest/rng.hpp"

namespace qest {

// Factorized prior: g ~ log-normal with arithmetic mean mu_g and arithmetic
// std sigma_g, omega_r ~ N(mu_omega, sigma_omega), independent.
struct PriorSpec {
    double mu_g = 1.0;
    double sigma_g = 0.25;
    double mu_omega = 0.0;
    double sigma_omega = 1.0;

    void validate() const {
        if (!(mu_g > 0.0) || !(sigma_g > 0.0) || !(sigma_omega > 0.0) ||
            !std::isfinite(mu_omega))
            throw std::invalid_argument(
                "PriorSpec: need mu_g > 0, sigma_g > 0, sigma_omega > 0");
    }

    // Underlying normal parameters of the log-normal g marginal:
    // sigma_ln^2 = ln(1 + s^2/m^2), mu_ln = ln m - sigma_ln^2 / 2.
    double log_sigma() const {
        return std::sqrt(std::log(1.0 + (sigma_g * sigma_g) / (mu_g * mu_g)));
    }
    double log_mu() const {
        const double s2 = std::log(1.0 + (sigma_g * sigma_g) / (mu_g * mu_g));
        return std::log(mu_g) - 0.5 * s2;
    }

    double sample_g(Rng& rng) const { return std::exp(log_mu() + log_sigma() * rng.normal()); }
    double sample_omega(Rng& rng) const { return mu_omega + sigma_omega * rng.normal(); }

    // Same widths, new center. The log-normal is re-parameterized so its
    // arithmetic mean equals new_mu_g.
    PriorSpec recentered(double new_mu_g, double new_mu_omega) const {
        PriorSpec p = *this;
        p.mu_g = new_mu_g;
        p.mu_omega = new_mu_omega;
        return p;
    }
};

}  // namespace qest
