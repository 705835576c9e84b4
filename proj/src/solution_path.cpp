#include "wbs2/solution_path.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include <omp.h>

#include "wbs2/parallel.hpp"

namespace wbs2 {

namespace {

// Domains whose candidate search touches fewer split points than this stay
// on the serial kernel even when threads are available.
constexpr std::size_t kParallelWorkThreshold = std::size_t{1} << 18;

bool exhaustive(std::size_t n, std::size_t m_tilde) {
    // n(n-1)/2 overflows only for n > 2^32, far beyond any series we accept.
    return m_tilde >= n * (n - 1) / 2;
}

void draw_into(Index s, Index e, std::size_t m_tilde, Rng& rng, std::vector<Interval>& out) {
    out.clear();
    const std::size_t n = e - s + 1;
    if (exhaustive(n, m_tilde)) {
        out.reserve(n * (n - 1) / 2);
        for (Index a = s; a < e; ++a) {
            for (Index b = a + 1; b <= e; ++b) out.push_back({a, b});
        }
        return;
    }
    out.reserve(m_tilde + 1);
    for (std::size_t m = 0; m < m_tilde; ++m) {
        Index a = 0;
        Index b = 0;
        do {
            a = rng.uniform_int(s, e);
            b = rng.uniform_int(s, e);
        } while (a == b);
        if (a > b) std::swap(a, b);
        out.push_back({a, b});
    }
}

bool better(double stat, std::size_t idx, double best_stat, std::size_t best_idx) {
    return stat > best_stat || (stat == best_stat && idx < best_idx);
}

}  // namespace

std::vector<Interval> draw_intervals(Index s, Index e, std::size_t m_tilde, Rng& rng) {
    if (s < 1 || e <= s) {
        throw PreconditionError("draw_intervals needs a domain of length >= 2, got [" +
                                std::to_string(s) + ", " + std::to_string(e) + "]");
    }
    if (m_tilde == 0) throw PreconditionError("m_tilde must be positive");
    std::vector<Interval> out;
    draw_into(s, e, m_tilde, rng, out);
    return out;
}

PathEntry best_candidate_serial(const TimeSeries& x, std::span<const Interval> intervals) {
    PathEntry best{};
    best.stat = -1.0;
    for (const auto& iv : intervals) {
        const Split sp = cusum_argmax_unchecked(x, iv.s, iv.e);
        if (sp.stat > best.stat) best = {iv.s, iv.e, sp.b, sp.stat};
    }
    return best;
}

PathEntry best_candidate_omp(const TimeSeries& x, std::span<const Interval> intervals, int jobs) {
    const auto count = static_cast<long long>(intervals.size());
    double best_stat = -1.0;
    std::size_t best_idx = intervals.size();
    Split best_split{};
#pragma omp parallel num_threads(jobs)
    {
        double local_stat = -1.0;
        std::size_t local_idx = intervals.size();
        Split local_split{};
#pragma omp for schedule(dynamic, 4) nowait
        for (long long m = 0; m < count; ++m) {
            const auto& iv = intervals[static_cast<std::size_t>(m)];
            const Split sp = cusum_argmax_unchecked(x, iv.s, iv.e);
            if (better(sp.stat, static_cast<std::size_t>(m), local_stat, local_idx)) {
                local_stat = sp.stat;
                local_idx = static_cast<std::size_t>(m);
                local_split = sp;
            }
        }
#pragma omp critical(wbs2_best_candidate)
        if (local_idx < intervals.size() && better(local_stat, local_idx, best_stat, best_idx)) {
            best_stat = local_stat;
            best_idx = local_idx;
            best_split = local_split;
        }
    }
    if (best_idx == intervals.size()) return PathEntry{0, 0, 0, -1.0};
    const auto& iv = intervals[best_idx];
    return {iv.s, iv.e, best_split.b, best_split.stat};
}

SolutionPath wbs2_solution_path(const TimeSeries& x, const Wbs2Config& cfg) {
    if (cfg.m_tilde == 0) throw PreconditionError("m_tilde must be positive");
    const std::size_t T = x.size();
    SolutionPath path;
    if (T < 2) return path;
    path.entries.reserve(T - 1);

    Rng rng(cfg.seed);
    std::vector<Interval> intervals;
    // Explicit depth-first stack, left child processed before right, which
    // reproduces the draw order of the recursive formulation.
    std::vector<Interval> stack{{1, T}};
    while (!stack.empty()) {
        const Interval dom = stack.back();
        stack.pop_back();
        if (dom.e <= dom.s) continue;

        draw_into(dom.s, dom.e, cfg.m_tilde, rng, intervals);
        if (cfg.include_full_domain && !exhaustive(dom.length(), cfg.m_tilde)) {
            intervals.push_back(dom);
        }

        PathEntry best;
        const bool go_parallel = cfg.jobs > 1 && !omp_in_parallel() &&
                                 intervals.size() * dom.length() / 3 >= kParallelWorkThreshold;
        if (go_parallel) {
            best = best_candidate_omp(x, intervals, cfg.jobs);
        } else {
            best = best_candidate_serial(x, intervals);
        }
        path.entries.push_back(best);
        stack.push_back({best.b + 1, dom.e});
        stack.push_back({dom.s, best.b});
    }

    // Sort by statistic, breaking ties with seeded random keys.
    std::vector<std::uint64_t> keys(path.entries.size());
    for (auto& k : keys) k = rng.next();
    std::vector<std::size_t> order(path.entries.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const double sa = path.entries[a].stat;
        const double sb = path.entries[b].stat;
        if (sa != sb) return sa > sb;
        return keys[a] < keys[b];
    });
    SolutionPath sorted;
    sorted.entries.reserve(order.size());
    for (std::size_t i : order) sorted.entries.push_back(path.entries[i]);
    return sorted;
}

EnsembleResult median_run_ensemble(const TimeSeries& x, const Wbs2Config& cfg,
                                   const RunDetector& detector, std::size_t runs, int jobs) {
    if (runs == 0) throw PreconditionError("ensemble needs at least one run");
    std::vector<ChangePointModel> models(runs);
    for_each_index(runs, jobs, [&](std::size_t r) {
        Wbs2Config run_cfg = cfg;
        run_cfg.seed = cfg.seed + r;
        run_cfg.jobs = 1;
        models[r] = detector(x, run_cfg);
    });

    EnsembleResult result;
    result.counts.reserve(runs);
    for (const auto& m : models) result.counts.push_back(m.n_hat);
    std::vector<std::size_t> sorted_counts = result.counts;
    std::sort(sorted_counts.begin(), sorted_counts.end());
    const std::size_t median = sorted_counts[(runs - 1) / 2];
    const auto it = std::find(result.counts.begin(), result.counts.end(), median);
    result.median_run = static_cast<std::size_t>(it - result.counts.begin());

    for (const auto& m : models) {
        result.pooled.insert(result.pooled.end(), m.locations.begin(), m.locations.end());
    }
    std::sort(result.pooled.begin(), result.pooled.end());
    result.model = std::move(models[result.median_run]);
    return result;
}

std::vector<std::pair<Index, std::size_t>> location_histogram(std::span<const Index> pooled) {
    std::vector<std::pair<Index, std::size_t>> hist;
    for (Index b : pooled) {
        if (!hist.empty() && hist.back().first == b) {
            ++hist.back().second;
        } else {
            hist.emplace_back(b, 1);
        }
    }
    return hist;
}

}  // namespace wbs2
