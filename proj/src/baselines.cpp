#include "wbs2/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include "wbs2/estimation.hpp"
#include "wbs2/sdll.hpp"
#include "wbs2/solution_path.hpp"

namespace wbs2 {

namespace {

double wbs_threshold(const TimeSeries& x, double threshold_constant) {
    return sdll_threshold(threshold_constant, guarded_sigma(x, mad(x)), x.size());
}

std::vector<Index> sorted_locations(std::span<const PathEntry> entries) {
    std::vector<Index> out;
    out.reserve(entries.size());
    for (const auto& p : entries) out.push_back(p.b);
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

std::vector<Interval> draw_wbs_intervals(std::size_t T, std::size_t m, Rng& rng) {
    return draw_intervals(1, T, m, rng);
}

std::vector<PathEntry> interval_candidates(const TimeSeries& x, std::span<const Interval> intervals) {
    std::vector<PathEntry> out;
    out.reserve(intervals.size());
    for (const auto& iv : intervals) {
        if (iv.s < 1 || iv.e > x.size() || iv.e <= iv.s) {
            throw PreconditionError("interval outside the series or shorter than 2");
        }
        const Split sp = cusum_argmax_unchecked(x, iv.s, iv.e);
        out.push_back({iv.s, iv.e, sp.b, sp.stat});
    }
    return out;
}

std::vector<PathEntry> wbs_threshold_recursive(const TimeSeries& x, std::span<const PathEntry> candidates,
                                               double zeta, bool fallback_full_domain) {
    std::vector<PathEntry> accepted;
    if (x.size() < 2) return accepted;
    std::vector<Interval> stack{{1, x.size()}};
    while (!stack.empty()) {
        const Interval dom = stack.back();
        stack.pop_back();
        if (dom.e <= dom.s) continue;

        const PathEntry* best = nullptr;
        for (const auto& c : candidates) {
            if (c.s >= dom.s && c.e <= dom.e && (best == nullptr || c.stat > best->stat)) best = &c;
        }
        PathEntry chosen;
        if (best != nullptr) {
            chosen = *best;
        } else if (fallback_full_domain) {
            const Split sp = cusum_argmax_unchecked(x, dom.s, dom.e);
            chosen = {dom.s, dom.e, sp.b, sp.stat};
        } else {
            continue;
        }
        if (chosen.stat < zeta) continue;
        accepted.push_back(chosen);
        stack.push_back({chosen.b + 1, dom.e});
        stack.push_back({dom.s, chosen.b});
    }
    return accepted;
}

ChangePointModel wbs_detect_threshold(const TimeSeries& x, const WbsConfig& cfg) {
    if (x.size() < 2) return fit_piecewise_mean(x, {});
    Rng rng(cfg.seed);
    const auto intervals = draw_wbs_intervals(x.size(), cfg.m, rng);
    const auto candidates = interval_candidates(x, intervals);
    const auto accepted = wbs_threshold_recursive(x, candidates, wbs_threshold(x, cfg.threshold_constant),
                                                  cfg.fallback_full_domain);
    return fit_piecewise_mean(x, sorted_locations(accepted));
}

SolutionPath wbs_solution_path(std::span<const PathEntry> candidates) {
    std::vector<std::size_t> order(candidates.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return candidates[a].stat > candidates[b].stat;
    });

    SolutionPath path;
    std::set<Index> chosen;
    for (std::size_t m : order) {
        const auto& c = candidates[m];
        // Removed if an earlier pick b satisfies s_m <= b < e_m.
        const auto it = chosen.lower_bound(c.s);
        if (it != chosen.end() && *it < c.e) continue;
        chosen.insert(c.b);
        path.entries.push_back(c);
    }
    return path;
}

SolutionPath wbs_solution_path(const TimeSeries& x, const WbsConfig& cfg) {
    if (x.size() < 2) return {};
    Rng rng(cfg.seed);
    const auto intervals = draw_wbs_intervals(x.size(), cfg.m, rng);
    return wbs_solution_path(interval_candidates(x, intervals));
}

std::vector<double> bic_curve(const SolutionPath& path, const TimeSeries& x) {
    const std::size_t T = x.size();
    if (T == 0) return {};
    const auto v = x.values();
    std::vector<long double> sq(T + 1, 0.0L);
    for (std::size_t t = 0; t < T; ++t) sq[t + 1] = sq[t] + static_cast<long double>(v[t]) * v[t];

    // Residual sum of squares of the 1-based segment [a, c] about its mean.
    // Values within rounding of zero are exact fits and are reported as 0.
    const auto sse = [&](Index a, Index c) {
        const long double s2 = sq[c] - sq[a - 1];
        const long double s1 = x.range_sum(a, c);
        const long double r = s2 - s1 * s1 / static_cast<long double>(c - a + 1);
        return r <= 1e-15L * s2 ? 0.0L : r;
    };

    const double lnT = std::log(static_cast<double>(T));
    const auto bic = [&](long double rss, std::size_t k) {
        const double fit = rss <= 0.0L ? -std::numeric_limits<double>::infinity()
                                        : 0.5 * static_cast<double>(T) *
                                              std::log(static_cast<double>(rss) / static_cast<double>(T));
        return fit + static_cast<double>(k) * lnT;
    };

    std::vector<double> curve;
    curve.reserve(path.size() + 1);
    std::set<Index> bounds{0, T};
    long double rss = sse(1, T);
    curve.push_back(bic(rss, 0));
    for (std::size_t k = 0; k < path.size(); ++k) {
        const Index b = path.entries[k].b;
        const auto right = bounds.upper_bound(b);
        const Index r = *right;
        const Index l = *std::prev(right);
        rss += sse(l + 1, b) + sse(b + 1, r) - sse(l + 1, r);
        if (rss < 0.0L) rss = 0.0L;
        bounds.insert(b);
        curve.push_back(bic(rss, k + 1));
    }
    return curve;
}

ChangePointModel wbs_bic_select(const SolutionPath& path, const TimeSeries& x) {
    if (!path.is_sorted()) throw PreconditionError("solution path is not sorted by statistic");
    const auto curve = bic_curve(path, x);
    if (curve.empty()) return fit_piecewise_mean(x, {});
    const auto k = static_cast<std::size_t>(std::min_element(curve.begin(), curve.end()) - curve.begin());
    return fit_piecewise_mean(x, sorted_locations(std::span(path.entries).first(k)));
}

ChangePointModel binseg_detect(const TimeSeries& x, double threshold_constant) {
    if (x.size() < 2) return fit_piecewise_mean(x, {});
    const double zeta = wbs_threshold(x, threshold_constant);
    std::vector<PathEntry> accepted;
    std::vector<Interval> stack{{1, x.size()}};
    while (!stack.empty()) {
        const Interval dom = stack.back();
        stack.pop_back();
        if (dom.e <= dom.s) continue;
        const Split sp = cusum_argmax_unchecked(x, dom.s, dom.e);
        if (sp.stat < zeta) continue;
        accepted.push_back({dom.s, dom.e, sp.b, sp.stat});
        stack.push_back({sp.b + 1, dom.e});
        stack.push_back({dom.s, sp.b});
    }
    return fit_piecewise_mean(x, sorted_locations(accepted));
}

}  // namespace wbs2
