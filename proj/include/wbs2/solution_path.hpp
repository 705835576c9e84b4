#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "wbs2/core.hpp"
#include "wbs2/rng.hpp"

namespace wbs2 {

struct Wbs2Config {
    std::size_t m_tilde = 100;  // interval draws per sub-domain
    std::uint64_t seed = 0;
    // Adds the current sub-domain itself to the random draws. With this off
    // the candidate set is exactly the drawn intervals.
    bool include_full_domain = true;
    // Threads for the per-domain candidate search on large domains.
    int jobs = 1;
};

/// Intervals examined on the sub-domain [s, e].
///
/// When m_tilde >= n(n-1)/2 for n = e-s+1 every sub-interval of length >= 2
/// is returned (in lexicographic order). Otherwise m_tilde intervals whose
/// end-points are drawn uniformly with replacement from {s..e}; a pair with
/// equal end-points is redrawn and the pair is ordered so that s_m < e_m.
std::vector<Interval> draw_intervals(Index s, Index e, std::size_t m_tilde, Rng& rng);

/// Largest |CUSUM| over every interval and every split inside it. Ties go to
/// the earliest interval in `intervals`, then to the smallest split.
PathEntry best_candidate_serial(const TimeSeries& x, std::span<const Interval> intervals);

/// OpenMP version of best_candidate_serial; returns the identical entry.
PathEntry best_candidate_omp(const TimeSeries& x, std::span<const Interval> intervals, int jobs);

/// The complete WBS2 solution path sorted by non-increasing statistic.
/// A series of length T yields exactly T-1 entries whose split locations
/// are a permutation of 1..T-1. Equal statistics are ordered at random
/// (seeded). Identical input and config give a bit-identical path.
SolutionPath wbs2_solution_path(const TimeSeries& x, const Wbs2Config& cfg);

/// Detection pipeline invoked once per ensemble run; cfg.seed varies per run.
using RunDetector = std::function<ChangePointModel(const TimeSeries&, const Wbs2Config&)>;

struct EnsembleResult {
    ChangePointModel model;        // the median run
    std::size_t median_run = 0;    // 0-based index of the chosen run
    std::vector<std::size_t> counts;  // N-hat of each run
    std::vector<Index> pooled;     // all locations of all runs, sorted
};

/// Runs `detector` with seeds cfg.seed, cfg.seed+1, ... and returns the first
/// run whose change-point count equals the (lower) median count.
EnsembleResult median_run_ensemble(const TimeSeries& x, const Wbs2Config& cfg,
                                   const RunDetector& detector, std::size_t runs, int jobs = 1);

/// (location, multiplicity) pairs of a sorted pooled location list.
std::vector<std::pair<Index, std::size_t>> location_histogram(std::span<const Index> pooled);

}  // namespace wbs2
