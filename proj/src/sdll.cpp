#include "wbs2/sdll.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <numeric>

#include "wbs2/estimation.hpp"

namespace wbs2 {

double sdll_threshold(double threshold_constant, double sigma, std::size_t T) {
    return threshold_constant * sigma * std::sqrt(2.0 * std::log(static_cast<double>(T)));
}

std::size_t sdll_count(std::span<const double> stats, double zeta, double beta) {
    if (!(beta > 0.0 && beta < 1.0)) throw PreconditionError("beta must lie in (0, 1)");
    if (!(zeta > 0.0)) throw PreconditionError("SDLL threshold must be positive");
    if (stats.empty()) return 0;
    if (stats[0] < zeta) return 0;

    const double low = beta * zeta;
    // Sorted input: {k : stat[k+1] >= low} is 1..K with K = #{stat >= low} - 1.
    const auto above = static_cast<std::size_t>(
        std::find_if(stats.begin(), stats.end(), [low](double v) { return v < low; }) -
        stats.begin());
    const std::size_t K = above - 1;
    if (K == 0) return 1;

    std::size_t best_k = 0;
    double best_drop = -std::numeric_limits<double>::infinity();
    // stats are 0-based here: stat_k is stats[k-1].
    for (std::size_t k = 1; k <= K; ++k) {
        const double next = stats[k];
        assert(next >= low && next > 0.0);
        if (next > zeta) continue;
        const double drop = std::log(stats[k - 1]) - std::log(next);
        if (drop > best_drop) {
            best_drop = drop;
            best_k = k;
        }
    }
    return best_k == 0 ? K + 1 : best_k;
}

std::vector<Index> sdll_select(const SolutionPath& path, std::size_t T, const SdllConfig& cfg) {
    if (!cfg.sigma_hat) throw PreconditionError("sdll_select needs sigma_hat");
    if (!(cfg.threshold_constant > 0.0)) throw PreconditionError("threshold constant must be positive");
    if (!path.is_sorted()) throw PreconditionError("solution path is not sorted by statistic");
    if (path.empty() || T < 2) return {};

    const double zeta = sdll_threshold(cfg.threshold_constant, *cfg.sigma_hat, T);
    const auto stats = path.stats();
    const std::size_t n_hat = sdll_count(stats, zeta, cfg.beta);
    std::vector<Index> locations;
    locations.reserve(n_hat);
    for (std::size_t k = 0; k < n_hat; ++k) locations.push_back(path.entries[k].b);
    std::sort(locations.begin(), locations.end());
    return locations;
}

double guarded_sigma(const TimeSeries& x, double sigma) {
    const double floor = std::numeric_limits<double>::epsilon() * std::max(1.0, x.max_abs());
    return std::max(sigma, floor);
}

ChangePointModel detect(const TimeSeries& x, const Wbs2Config& wbs2_cfg, const SdllConfig& sdll_cfg) {
    if (x.size() < 2) return fit_piecewise_mean(x, {});

    SdllConfig cfg = sdll_cfg;
    cfg.sigma_hat = guarded_sigma(x, sdll_cfg.sigma_hat ? *sdll_cfg.sigma_hat : mad(x));
    const SolutionPath path = wbs2_solution_path(x, wbs2_cfg);
    const auto locations = sdll_select(path, x.size(), cfg);
    return fit_piecewise_mean(x, locations);
}

}  // namespace wbs2
