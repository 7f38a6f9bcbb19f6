#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace qest {

// Hypothesized or true qubit-resonator pair: coupling strength g and
// resonator angular frequency omega_r. All frequencies are angular, in
// arbitrary consistent units; times are in the inverse units.
struct SystemParams {
    double g = 1.0;
    double omega_r = 0.0;

    void validate() const {
        if (!(g > 0.0) || !std::isfinite(g) || !std::isfinite(omega_r))
            throw std::invalid_argument("SystemParams: need finite g > 0, finite omega_r");
    }
};

// Experimenter's knobs: qubit frequency omega_q and free-evolution time t.
struct ControlSetting {
    double omega_q = 0.0;
    double t = 0.0;

    void validate() const {
        if (!(t >= 0.0) || !std::isfinite(t) || !std::isfinite(omega_q))
            throw std::invalid_argument("ControlSetting: need finite omega_q and t >= 0");
    }
};

// Relaxation time T1 (infinity allowed, represented exactly) and readout
// bit-flip probability p_e.
struct NoiseParams {
    double t1 = std::numeric_limits<double>::infinity();
    double p_e = 0.0;

    bool t1_infinite() const { return std::isinf(t1); }

    void validate() const {
        if (!(t1 > 0.0)) throw std::invalid_argument("NoiseParams: t1 must be positive");
        if (!(p_e >= 0.0 && p_e <= 1.0))
            throw std::invalid_argument("NoiseParams: p_e must be in [0, 1]");
    }
};

struct DerivedFrequencies {
    double delta_omega;  // omega_q - omega_r
    double omega_rabi;   // sqrt(delta^2 + 4 g^2)
};

inline DerivedFrequencies derived_frequencies(const SystemParams& params,
                                              const ControlSetting& setting) {
    const double delta = setting.omega_q - params.omega_r;
    return {delta, std::sqrt(delta * delta + 4.0 * params.g * params.g)};
}

// Probability of finding the qubit excited after evolving |10> for time t
// under H' = (delta/2) eta_z + g eta_x, no relaxation:
//   P = (4g^2/wR^2 cos(wR t) + 1 + delta^2/wR^2) / 2.
inline double excitation_probability(const SystemParams& params,
                                     const ControlSetting& setting) {
    const auto [delta, omega_rabi] = derived_frequencies(params, setting);
    const double wr2 = omega_rabi * omega_rabi;
    const double p = 0.5 * (4.0 * params.g * params.g / wr2 * std::cos(omega_rabi * setting.t) +
                            1.0 + delta * delta / wr2);
    return std::clamp(p, 0.0, 1.0);
}

// Same probability with qubit relaxation at rate 1/T1 (RWA result, valid for
// 1/T1 << g). Reduces exactly to the undamped formula when T1 is infinite.
inline double excitation_probability_damped(const SystemParams& params,
                                            const ControlSetting& setting,
                                            const NoiseParams& noise) {
    if (noise.t1_infinite()) return excitation_probability(params, setting);
    const auto [delta, omega_rabi] = derived_frequencies(params, setting);
    const double wr2 = omega_rabi * omega_rabi;
    const double t = setting.t;
    const double inv_2t1 = 0.5 / noise.t1;
    const double plus = (omega_rabi + delta) / (2.0 * omega_rabi);
    const double minus = (omega_rabi - delta) / (2.0 * omega_rabi);
    const double p = plus * plus * std::exp(-(omega_rabi + delta) * t * inv_2t1 / omega_rabi) +
                     minus * minus * std::exp(-(omega_rabi - delta) * t * inv_2t1 / omega_rabi) +
                     2.0 * params.g * params.g / wr2 * std::exp(-t * inv_2t1) *
                         std::cos(omega_rabi * t);
    return std::clamp(p, 0.0, 1.0);
}

// Likelihood of reported bit d after the symmetric readout-error channel.
// outcome_likelihood(0, ...) + outcome_likelihood(1, ...) == 1 exactly.
inline double outcome_likelihood(int d, const SystemParams& params,
                                 const ControlSetting& setting, const NoiseParams& noise) {
    const double p = excitation_probability_damped(params, setting, noise);
    const double p_reported_1 = p * (1.0 - noise.p_e) + (1.0 - p) * noise.p_e;
    return d == 1 ? p_reported_1 : 1.0 - p_reported_1;
}

}  // namespace qest
