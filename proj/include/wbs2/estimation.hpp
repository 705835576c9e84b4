#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "wbs2/core.hpp"
#include "wbs2/solution_path.hpp"

namespace wbs2 {

inline constexpr double kMadGaussianConstant = 1.4826;
inline constexpr double kIqrGaussianConstant = 1.3489795003921634;  // 2 * Phi^-1(3/4)

/// Median of a copy of the data; mean of the two central values for even sizes.
double median(std::vector<double> values);

/// Type-7 (linear interpolation) sample quantile, p in [0, 1].
double quantile(std::vector<double> values, double p);

/// MAD of the scaled differences (x[t+1] - x[t]) / sqrt(2), Gaussian-calibrated.
double mad(const TimeSeries& x);

/// IQR of the scaled differences, Gaussian-calibrated.
double iqr_estimator(const TimeSeries& x);

/// Threshold constants at anchor sample sizes, for one null-detection level.
struct ConstantTable {
    std::vector<std::pair<std::size_t, double>> anchors;  // (T, constant), T increasing
    double level = 0.9;

    void validate() const;
    friend bool operator==(const ConstantTable&, const ConstantTable&) = default;
};

/// Piecewise-linear in ln T between anchors, constant outside their range.
double interpolate_constant(const ConstantTable& table, std::size_t T);

/// Tables shipped with the library (regenerated by calibrate_constant).
const ConstantTable& default_constant_table(double level);

class CalibrationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Noise scale assumed while calibrating on N(0,1) series.
enum class CalibrationScale {
    known,  // sigma_hat = 1, the simulated standard deviation
    mad,    // sigma_hat = mad(x) of each simulated series
};

/// For `reps` pure N(0,1) series of length T: the largest WBS2 statistic
/// divided by sigma_hat * sqrt(2 ln T). SDLL returns zero change-points
/// exactly when this ratio is below the threshold constant.
std::vector<double> null_statistic_ratios(std::size_t T, std::size_t reps, std::uint64_t seed,
                                          std::size_t m_tilde = 100, int jobs = 1,
                                          CalibrationScale scale = CalibrationScale::known);

/// Smallest constant (bisection, tolerance `tol`) for which the fraction of
/// ratios strictly below it reaches `level`.
double smallest_constant_for_level(std::span<const double> ratios, double level, double tol = 0.005);

struct CalibrationOptions {
    std::size_t reps = 1000;
    std::uint64_t seed = 1;
    std::size_t m_tilde = 100;
    int jobs = 1;
    CalibrationScale scale = CalibrationScale::known;
    // Called after each grid point with (T, constant).
    std::function<void(std::size_t, double)> progress;
};

/// Monte-Carlo calibration of the threshold constant on a grid of sizes.
ConstantTable calibrate_constant(std::span<const std::size_t> grid, double level,
                                 const CalibrationOptions& options);

/// Plain-text form: a "# level=<p>" line, then one "T constant" pair per line.
void write_constant_table(std::ostream& out, const ConstantTable& table);
ConstantTable read_constant_table(std::istream& in);

}  // namespace wbs2
