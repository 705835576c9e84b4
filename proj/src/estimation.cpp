#include "wbs2/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "wbs2/parallel.hpp"
#include "wbs2/sdll.hpp"

namespace wbs2 {

double median(std::vector<double> values) {
    if (values.empty()) throw PreconditionError("median of an empty sample");
    const std::size_t n = values.size();
    const auto mid = values.begin() + static_cast<std::ptrdiff_t>(n / 2);
    std::nth_element(values.begin(), mid, values.end());
    const double upper = *mid;
    if (n % 2 == 1) return upper;
    const double lower = *std::max_element(values.begin(), mid);
    return 0.5 * (lower + upper);
}

double quantile(std::vector<double> values, double p) {
    if (values.empty()) throw PreconditionError("quantile of an empty sample");
    if (!(p >= 0.0 && p <= 1.0)) throw PreconditionError("quantile level outside [0, 1]");
    std::sort(values.begin(), values.end());
    const double h = static_cast<double>(values.size() - 1) * p;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

namespace {

std::vector<double> scaled_differences(const TimeSeries& x) {
    if (x.size() < 2) throw PreconditionError("noise estimation needs at least two observations");
    const auto v = x.values();
    std::vector<double> d(v.size() - 1);
    for (std::size_t t = 0; t + 1 < v.size(); ++t) d[t] = (v[t + 1] - v[t]) / std::sqrt(2.0);
    return d;
}

}  // namespace

double mad(const TimeSeries& x) {
    auto d = scaled_differences(x);
    const double center = median(d);
    for (double& v : d) v = std::abs(v - center);
    return kMadGaussianConstant * median(std::move(d));
}

double iqr_estimator(const TimeSeries& x) {
    const auto d = scaled_differences(x);
    return (quantile(d, 0.75) - quantile(d, 0.25)) / kIqrGaussianConstant;
}

void ConstantTable::validate() const {
    if (anchors.empty()) throw PreconditionError("constant table has no anchors");
    if (!(level > 0.0 && level < 1.0)) throw PreconditionError("table level outside (0, 1)");
    for (std::size_t i = 0; i < anchors.size(); ++i) {
        if (anchors[i].first < 1) throw PreconditionError("anchor sample size must be >= 1");
        if (!(anchors[i].second > 0.0)) throw PreconditionError("anchor constant must be positive");
        if (i > 0 && anchors[i].first <= anchors[i - 1].first) {
            throw PreconditionError("anchor sample sizes must be strictly increasing");
        }
    }
}

double interpolate_constant(const ConstantTable& table, std::size_t T) {
    table.validate();
    const auto& a = table.anchors;
    if (T <= a.front().first) return a.front().second;
    if (T >= a.back().first) return a.back().second;
    const auto hi = std::upper_bound(a.begin(), a.end(), T,
                                     [](std::size_t t, const auto& anchor) { return t < anchor.first; });
    const auto lo = hi - 1;
    const double x0 = std::log(static_cast<double>(lo->first));
    const double x1 = std::log(static_cast<double>(hi->first));
    const double w = (std::log(static_cast<double>(T)) - x0) / (x1 - x0);
    return lo->second + w * (hi->second - lo->second);
}

std::vector<double> null_statistic_ratios(std::size_t T, std::size_t reps, std::uint64_t seed,
                                          std::size_t m_tilde, int jobs, CalibrationScale scale) {
    if (T < 2) throw PreconditionError("calibration needs T >= 2");
    std::vector<double> ratios(reps);
    const double root_log = std::sqrt(2.0 * std::log(static_cast<double>(T)));
    for_each_index(reps, jobs, [&](std::size_t r) {
        Rng rng(derive_seed(seed, r));
        std::vector<double> noise(T);
        for (double& v : noise) v = rng.normal();
        const TimeSeries x(std::move(noise));
        const SolutionPath path = wbs2_solution_path(x, Wbs2Config{m_tilde, rng.next(), true, 1});
        const double sigma = scale == CalibrationScale::known ? 1.0 : guarded_sigma(x, mad(x));
        ratios[r] = path.entries.front().stat / (sigma * root_log);
    });
    return ratios;
}

double smallest_constant_for_level(std::span<const double> ratios, double level, double tol) {
    if (ratios.empty()) throw PreconditionError("no calibration replicates");
    if (!(level > 0.0 && level < 1.0)) throw PreconditionError("level outside (0, 1)");
    const auto reached = [&](double c) {
        const auto below = std::count_if(ratios.begin(), ratios.end(), [c](double r) { return r < c; });
        return static_cast<double>(below) >= level * static_cast<double>(ratios.size());
    };

    constexpr int kMaxIterations = 40;
    double lo = 0.0;
    double hi = 1.0;
    int iterations = 0;
    while (!reached(hi)) {
        lo = hi;
        hi *= 2.0;
        if (++iterations > kMaxIterations) {
            throw CalibrationError("no constant up to " + std::to_string(hi) + " reaches level " +
                                   std::to_string(level));
        }
    }
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        (reached(mid) ? hi : lo) = mid;
        if (++iterations > kMaxIterations) {
            std::ostringstream msg;
            msg << "bisection did not converge: bracket [" << lo << ", " << hi << "] after "
                << iterations << " iterations";
            throw CalibrationError(msg.str());
        }
    }
    return hi;
}

ConstantTable calibrate_constant(std::span<const std::size_t> grid, double level,
                                 const CalibrationOptions& options) {
    if (grid.empty()) throw PreconditionError("empty calibration grid");
    if (options.reps == 0) throw PreconditionError("calibration needs at least one replicate");
    ConstantTable table;
    table.level = level;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const std::size_t T = grid[i];
        const auto ratios = null_statistic_ratios(T, options.reps, derive_seed(options.seed, T),
                                                  options.m_tilde, options.jobs, options.scale);
        const double c = smallest_constant_for_level(ratios, level);
        table.anchors.emplace_back(T, c);
        if (options.progress) options.progress(T, c);
    }
    table.validate();
    return table;
}

void write_constant_table(std::ostream& out, const ConstantTable& table) {
    table.validate();
    out << "# level=" << table.level << '\n';
    out << "# T cTilde\n";
    for (const auto& [T, c] : table.anchors) out << T << ' ' << c << '\n';
}

ConstantTable read_constant_table(std::istream& in) {
    ConstantTable table;
    bool have_level = false;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        if (line[first] == '#') {
            const auto pos = line.find("level=");
            if (pos != std::string::npos) {
                try {
                    table.level = std::stod(line.substr(pos + 6));
                } catch (const std::exception&) {
                    throw ParseError(line_no, "bad level value");
                }
                have_level = true;
            }
            continue;
        }
        std::istringstream fields(line);
        long long T = 0;
        double c = 0.0;
        std::string extra;
        if (!(fields >> T >> c) || (fields >> extra) || T < 1 || !(c > 0.0)) {
            throw ParseError(line_no, "expected '<T> <constant>' with T >= 1 and constant > 0");
        }
        table.anchors.emplace_back(static_cast<std::size_t>(T), c);
    }
    if (!have_level) throw ParseError(line_no, "missing '# level=<p>' header");
    try {
        table.validate();
    } catch (const PreconditionError& e) {
        throw ParseError(line_no, e.what());
    }
    return table;
}

}  // namespace wbs2
