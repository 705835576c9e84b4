#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "wbs2/core.hpp"
#include "wbs2/rng.hpp"

namespace wbs2 {

// Classic wild binary segmentation (all intervals drawn once, up front) and
// plain binary segmentation. These reproduce the behaviour WBS2 improves on.

struct WbsConfig {
    std::size_t m = 5000;             // number of pre-drawn intervals
    double threshold_constant = 1.0;  // C in C * sigma_hat * sqrt(2 ln T)
    std::uint64_t seed = 0;
    // When no pre-drawn interval fits inside the current domain, examine the
    // domain itself instead of stopping.
    bool fallback_full_domain = true;
};

/// M intervals over 1..T; every sub-interval when M >= T(T-1)/2.
std::vector<Interval> draw_wbs_intervals(std::size_t T, std::size_t m, Rng& rng);

/// Per-interval CUSUM argmax, one entry per interval in input order.
std::vector<PathEntry> interval_candidates(const TimeSeries& x, std::span<const Interval> intervals);

/// Recursive thresholded WBS on precomputed per-interval candidates.
/// Returns accepted entries in discovery order.
std::vector<PathEntry> wbs_threshold_recursive(const TimeSeries& x, std::span<const PathEntry> candidates,
                                               double zeta, bool fallback_full_domain);

ChangePointModel wbs_detect_threshold(const TimeSeries& x, const WbsConfig& cfg);

/// Non-recursive WBS solution path: repeatedly move the strongest remaining
/// candidate onto the path and drop every interval that contains it. The
/// result is ordered by non-increasing statistic and is usually shorter than
/// T-1.
SolutionPath wbs_solution_path(std::span<const PathEntry> candidates);
SolutionPath wbs_solution_path(const TimeSeries& x, const WbsConfig& cfg);

/// BIC(k) = (T/2) ln(RSS_k / T) + k ln T for k = 0..|path|, where RSS_k is the
/// residual sum of squares of the fit using the first k path locations.
std::vector<double> bic_curve(const SolutionPath& path, const TimeSeries& x);

/// Fit using the BIC-minimising prefix of the path (smallest k on ties).
ChangePointModel wbs_bic_select(const SolutionPath& path, const TimeSeries& x);

/// Plain binary segmentation thresholded at C * sigma_hat * sqrt(2 ln T).
ChangePointModel binseg_detect(const TimeSeries& x, double threshold_constant);

}  // namespace wbs2
