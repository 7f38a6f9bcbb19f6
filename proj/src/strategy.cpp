#include "qest/strategy.hpp"

#include <algorithm>
#include <cmath>

namespace qest {

ControlSetting setting_from_draws(const PosteriorSummary& summary, std::size_t shot_index,
                                  const StrategyParams& params, double r_or_z, double r2) {
    if (!(summary.std_g > 0.0)) throw PosteriorCollapsed();
    ControlSetting setting;
    if (shot_index <= params.m0) {
        setting.t = params.a * r_or_z / summary.std_g;
        setting.omega_q = summary.mean_omega + (r2 - 0.5) * summary.mean_g;
    } else {
        setting.t = std::abs(params.a + params.b * r_or_z) / summary.std_g;
        setting.omega_q = summary.mean_omega + params.c * (r2 - 0.5) * summary.std_omega;
    }
    setting.t = std::min(setting.t, params.t_max);
    return setting;
}

ControlSetting next_setting(const PosteriorSummary& summary, std::size_t shot_index,
                            const StrategyParams& params, Rng& rng) {
    const double r_or_z = shot_index <= params.m0 ? rng.uniform01() : rng.normal();
    const double r2 = rng.uniform01();
    return setting_from_draws(summary, shot_index, params, r_or_z, r2);
}

ControlSetting grid_setting(std::size_t index, const GridSpec& grid) {
    if (index >= grid.size()) throw std::out_of_range("grid_setting: index out of range");
    const std::size_t row = index / grid.omega_count;  // t index
    const std::size_t col = index % grid.omega_count;  // omega_q index
    ControlSetting s;
    s.omega_q = grid.omega_min + (grid.omega_max - grid.omega_min) *
                                     static_cast<double>(col) /
                                     static_cast<double>(grid.omega_count - 1);
    s.t = grid.t_min + (grid.t_max - grid.t_min) * static_cast<double>(row) /
                           static_cast<double>(grid.t_count - 1);
    return s;
}

}  // namespace qest
