#pragma once

#include <cstddef>
#include <vector>

#include "qest/prior.hpp"
#include "qest/strategy.hpp"

namespace qest {

// Ensemble-averaged swap-spectroscopy acquisition: one empirical excited-state
// frequency per grid cell, row-major per grid_setting.
struct SpectroscopyData {
    std::vector<double> frequency;  // empirical (or exact) P(1) per cell
    std::size_t m_r = 0;            // repetitions behind each cell (0 = exact)
};

// Each cell is the mean of grid.m_r Bernoulli draws from the true system.
SpectroscopyData acquire_grid(const SystemParams& truth, const GridSpec& grid,
                              const NoiseParams& noise, Rng& rng);

// Sampling-free variant: cells are the analytic probabilities themselves.
SpectroscopyData acquire_grid_exact(const SystemParams& truth, const GridSpec& grid,
                                    const NoiseParams& noise);

struct FitResult {
    double g = 0.0;
    double omega_r = 0.0;
    double log_likelihood = 0.0;
    bool ok = false;           // false when the likelihood surface is flat
    bool at_boundary = false;  // best point pinned to the search box edge
};

// Maximum-likelihood (g, omega_r) fit of the grid data under the outcome
// model: coarse search over the search prior's +-4 sigma box, then a
// Nelder-Mead polish.
FitResult fit_grid(const SpectroscopyData& data, const GridSpec& grid,
                   const NoiseParams& noise, const PriorSpec& search_prior);

}  // namespace qest
