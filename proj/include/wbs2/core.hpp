#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace wbs2 {

// All indices exchanged through the public API are 1-based: a series of
// length T has points 1..T and admissible change-point locations 1..T-1.
using Index = std::size_t;

/// Raised when a caller violates a documented precondition.
class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised for non-finite or otherwise unusable input data.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed text input; carries the 1-based line number.
class ParseError : public InputError {
public:
    ParseError(std::size_t line, const std::string& what)
        : InputError("line " + std::to_string(line) + ": " + what), line_(line) {}
    [[nodiscard]] std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// An observed sequence together with extended-precision prefix sums.
///
/// The prefix array has T+1 entries with prefix[0] = 0 so that the sum over
/// any 1-based closed range [s, e] is prefix[e] - prefix[s-1]. Sums are held
/// in long double, which keeps O(1) range sums accurate for T up to 1e6.
class TimeSeries {
public:
    TimeSeries() = default;
    explicit TimeSeries(std::vector<double> values);

    [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
    [[nodiscard]] bool empty() const noexcept { return values_.empty(); }
    [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
    [[nodiscard]] std::span<const long double> prefix() const noexcept { return prefix_; }

    /// Value at 1-based position t.
    [[nodiscard]] double at(Index t) const { return values_.at(t - 1); }

    /// Sum of values over the 1-based closed range [s, e]; s > e gives 0.
    [[nodiscard]] long double range_sum(Index s, Index e) const noexcept {
        return prefix_[e] - prefix_[s - 1];
    }
    [[nodiscard]] double range_mean(Index s, Index e) const noexcept {
        return static_cast<double>(range_sum(s, e) / static_cast<long double>(e - s + 1));
    }

    [[nodiscard]] double max_abs() const noexcept;

private:
    std::vector<double> values_;
    std::vector<long double> prefix_{0.0L};
};

struct Interval {
    Index s = 0;
    Index e = 0;

    [[nodiscard]] std::size_t length() const noexcept { return e - s + 1; }
    friend bool operator==(const Interval&, const Interval&) = default;
};

/// One element of a solution path: the interval on which the candidate was
/// found, the split location and its absolute CUSUM.
struct PathEntry {
    Index s = 0;
    Index e = 0;
    Index b = 0;
    double stat = 0.0;

    friend bool operator==(const PathEntry&, const PathEntry&) = default;
};

struct SolutionPath {
    std::vector<PathEntry> entries;

    [[nodiscard]] std::size_t size() const noexcept { return entries.size(); }
    [[nodiscard]] bool empty() const noexcept { return entries.empty(); }
    [[nodiscard]] bool is_sorted() const noexcept;
    [[nodiscard]] std::vector<double> stats() const;
    [[nodiscard]] std::vector<Index> locations() const;

    friend bool operator==(const SolutionPath&, const SolutionPath&) = default;
};

/// A fitted piecewise-constant model.
struct ChangePointModel {
    std::size_t n_hat = 0;
    std::vector<Index> locations;  // strictly increasing, each in 1..T-1
    std::vector<double> fit;       // length T

    [[nodiscard]] std::size_t length() const noexcept { return fit.size(); }
};

struct Split {
    Index b = 0;
    double stat = 0.0;  // |CUSUM| at b
};

/// Signed CUSUM contrast of the means left and right of b on [s, e].
double cusum_at(const TimeSeries& x, Index s, Index e, Index b);

/// Location maximising |CUSUM| over b in [s, e-1]; the smallest b wins ties.
Split cusum_argmax(const TimeSeries& x, Index s, Index e);

/// Same as cusum_argmax without precondition checks. Hot loop of every
/// segmentation routine; callers guarantee 1 <= s < e <= T.
Split cusum_argmax_unchecked(const TimeSeries& x, Index s, Index e) noexcept;

/// Piecewise-mean fit for the given strictly increasing locations.
ChangePointModel fit_piecewise_mean(const TimeSeries& x, std::span<const Index> locations);

/// Residual sum of squares of a model's fit against the data.
double residual_sum_of_squares(const TimeSeries& x, const ChangePointModel& model);

}  // namespace wbs2
