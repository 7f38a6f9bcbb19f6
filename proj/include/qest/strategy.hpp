#pragma once

#include <cstddef>
#include <stdexcept>

#include "qest/particles.hpp"
#include "qest/physics.hpp"
#include "qest/rng.hpp"

namespace qest {

// The posterior has collapsed (std_g == 0); there is nothing left to learn.
struct PosteriorCollapsed : std::runtime_error {
    PosteriorCollapsed() : std::runtime_error("posterior std_g is zero") {}
};

struct StrategyParams {
    double a = 1.57;
    double b = 0.518;
    double c = 3.0;
    std::size_t m0 = 15;          // warm-up shot count
    double t_max = 1e6;           // hard cap on the waiting time
    std::size_t shots_per_setting = 1;

    void validate() const {
        if (!(a > 0.0) || !(b >= 0.0) || !(c > 0.0) || !(t_max > 0.0) ||
            shots_per_setting < 1)
            throw std::invalid_argument("StrategyParams: need a > 0, b >= 0, c > 0, "
                                        "t_max > 0, shots_per_setting >= 1");
    }
};

// Deterministic core of the adaptive rule, with the random draws passed in.
// For shot M <= m0 (warm-up): t = a r1 / std_g, omega_q = mean_omega + (r2 - 1/2) mean_g
// with r1 = r_or_z uniform on [0,1]. For M > m0: t = |a + b z| / std_g,
// omega_q = mean_omega + c (r2 - 1/2) std_omega with z = r_or_z standard normal.
ControlSetting setting_from_draws(const PosteriorSummary& summary, std::size_t shot_index,
                                  const StrategyParams& params, double r_or_z, double r2);

// Draws (r1 or z) then r2 from the stream, in that order, and applies the rule.
ControlSetting next_setting(const PosteriorSummary& summary, std::size_t shot_index,
                            const StrategyParams& params, Rng& rng);

// Evenly spaced rectangular (omega_q, t) grid for the swap-spectroscopy
// baseline, enumerated row-major (omega_q fastest).
struct GridSpec {
    double omega_min = -3.0, omega_max = 3.0;
    std::size_t omega_count = 30;
    double t_min = 0.0, t_max = 18.0;
    std::size_t t_count = 30;
    std::size_t m_r = 1000;  // repetitions per setting

    std::size_t size() const { return omega_count * t_count; }

    void validate() const {
        if (omega_count < 2 || t_count < 2 || m_r < 1 || !(omega_max > omega_min) ||
            !(t_max > t_min) || t_min < 0.0)
            throw std::invalid_argument("GridSpec: counts >= 2, non-degenerate ranges, m_r >= 1");
    }
};

ControlSetting grid_setting(std::size_t index, const GridSpec& grid);

}  // namespace qest
