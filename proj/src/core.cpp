#include "wbs2/core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace wbs2 {

TimeSeries::TimeSeries(std::vector<double> values) : values_(std::move(values)) {
    prefix_.resize(values_.size() + 1);
    prefix_[0] = 0.0L;
    for (std::size_t t = 0; t < values_.size(); ++t) {
        if (!std::isfinite(values_[t])) {
            throw InputError("non-finite value at position " + std::to_string(t + 1));
        }
        prefix_[t + 1] = prefix_[t] + static_cast<long double>(values_[t]);
    }
}

double TimeSeries::max_abs() const noexcept {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

bool SolutionPath::is_sorted() const noexcept {
    return std::is_sorted(entries.begin(), entries.end(),
                          [](const PathEntry& a, const PathEntry& b) { return a.stat > b.stat; });
}

std::vector<double> SolutionPath::stats() const {
    std::vector<double> out;
    out.reserve(entries.size());
    for (const auto& p : entries) out.push_back(p.stat);
    return out;
}

std::vector<Index> SolutionPath::locations() const {
    std::vector<Index> out;
    out.reserve(entries.size());
    for (const auto& p : entries) out.push_back(p.b);
    return out;
}

namespace {

void check_range(const TimeSeries& x, Index s, Index e) {
    if (s < 1 || e > x.size() || s >= e) {
        throw PreconditionError("interval [" + std::to_string(s) + ", " + std::to_string(e) +
                                "] is not a valid sub-interval of length >= 2 of 1.." +
                                std::to_string(x.size()));
    }
}

}  // namespace

// With n = e-s+1, l = b-s+1, r = e-b, L the left sum and S the total, the
// statistic reduces to (n*L - l*S) / sqrt(n*l*r).
double cusum_at(const TimeSeries& x, Index s, Index e, Index b) {
    check_range(x, s, e);
    if (b < s || b >= e) {
        throw PreconditionError("split " + std::to_string(b) + " outside [" + std::to_string(s) +
                                ", " + std::to_string(e - 1) + "]");
    }
    const auto n = static_cast<long double>(e - s + 1);
    const auto l = static_cast<long double>(b - s + 1);
    const auto r = static_cast<long double>(e - b);
    const long double left = x.range_sum(s, b);
    const long double total = x.range_sum(s, e);
    return static_cast<double>((n * left - l * total) / std::sqrt(n * l * r));
}

Split cusum_argmax_unchecked(const TimeSeries& x, Index s, Index e) noexcept {
    const auto prefix = x.prefix();
    const long double base = prefix[s - 1];
    const long double total = prefix[e] - base;
    const auto n = static_cast<long double>(e - s + 1);

    // Compare squared contrasts scaled by 1/(l*r); the common 1/n is dropped.
    Index best_b = s;
    long double best = -1.0L;
    for (Index b = s; b < e; ++b) {
        const auto l = static_cast<long double>(b - s + 1);
        const long double d = n * (prefix[b] - base) - l * total;
        const long double v = d * d / (l * (n - l));
        if (v > best) {
            best = v;
            best_b = b;
        }
    }
    return {best_b, static_cast<double>(std::sqrt(best / n))};
}

Split cusum_argmax(const TimeSeries& x, Index s, Index e) {
    check_range(x, s, e);
    return cusum_argmax_unchecked(x, s, e);
}

ChangePointModel fit_piecewise_mean(const TimeSeries& x, std::span<const Index> locations) {
    const std::size_t T = x.size();
    for (std::size_t i = 0; i < locations.size(); ++i) {
        if (locations[i] < 1 || locations[i] >= T) {
            throw PreconditionError("location " + std::to_string(locations[i]) +
                                    " outside 1.." + std::to_string(T == 0 ? 0 : T - 1));
        }
        if (i > 0 && locations[i] <= locations[i - 1]) {
            throw PreconditionError("locations must be strictly increasing");
        }
    }

    ChangePointModel model;
    model.n_hat = locations.size();
    model.locations.assign(locations.begin(), locations.end());
    model.fit.resize(T);
    Index start = 1;
    for (std::size_t i = 0; i <= locations.size(); ++i) {
        const Index end = i < locations.size() ? locations[i] : T;
        if (end < start) break;  // only reachable for T == 0
        const double mean = x.range_mean(start, end);
        std::fill(model.fit.begin() + static_cast<std::ptrdiff_t>(start - 1),
                  model.fit.begin() + static_cast<std::ptrdiff_t>(end), mean);
        start = end + 1;
    }
    return model;
}

double residual_sum_of_squares(const TimeSeries& x, const ChangePointModel& model) {
    const auto v = x.values();
    double rss = 0.0;
    for (std::size_t t = 0; t < v.size(); ++t) {
        const double d = v[t] - model.fit[t];
        rss += d * d;
    }
    return rss;
}

}  // namespace wbs2
