#pragma once

#include <optional>
#include <span>
#include <vector>

#include "wbs2/core.hpp"
#include "wbs2/solution_path.hpp"

namespace wbs2 {

/// Steepest-drop-to-low-levels selection parameters. The threshold is
/// threshold_constant * sigma_hat * sqrt(2 ln T).
struct SdllConfig {
    double threshold_constant = 1.0;
    double beta = 0.3;
    // Noise scale; estimated from the data with mad() when empty.
    std::optional<double> sigma_hat;
};

/// threshold_constant * sigma * sqrt(2 ln T), natural logarithm.
double sdll_threshold(double threshold_constant, double sigma, std::size_t T);

/// Number of change-points selected from statistics sorted non-increasingly.
///
/// Zero if the largest statistic is below `zeta`. Otherwise the search is
/// restricted to k = 1..K where K is the last k with stat[k+1] >= beta*zeta.
/// Among those k whose next statistic falls to or below `zeta`, the one with
/// the largest log-drop log stat[k] - log stat[k+1] is returned (smallest k
/// on ties); K+1 if no such k exists.
std::size_t sdll_count(std::span<const double> sorted_stats, double zeta, double beta);

/// Selected locations, sorted increasingly: the first N-hat splits of the path.
/// cfg.sigma_hat must be set and the path must be sorted.
std::vector<Index> sdll_select(const SolutionPath& path, std::size_t T, const SdllConfig& cfg);

/// Noise scale actually used for thresholds: sigma, floored at
/// eps * max(1, max|x|) so that noiseless inputs keep a positive threshold.
double guarded_sigma(const TimeSeries& x, double sigma);

/// WBS2 solution path, SDLL selection, piecewise-mean fit.
ChangePointModel detect(const TimeSeries& x, const Wbs2Config& wbs2_cfg, const SdllConfig& sdll_cfg);

}  // namespace wbs2
