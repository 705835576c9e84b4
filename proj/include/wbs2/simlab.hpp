#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "wbs2/core.hpp"
#include "wbs2/rng.hpp"

namespace wbs2 {

/// A noiseless piecewise-constant signal with its change-point set
/// (every t with values[t+1] != values[t], 1-based).
struct SignalSpec {
    std::string name;
    std::vector<double> values;
    std::vector<Index> change_points;

    [[nodiscard]] std::size_t n_true() const noexcept { return change_points.size(); }
    friend bool operator==(const SignalSpec&, const SignalSpec&) = default;
};

/// Change points of a sequence: positions t (1-based) where the next value differs.
std::vector<Index> jump_locations(std::span<const double> values);

SignalSpec make_signal(std::string name, std::vector<double> values);

/// f_t = 0 when 1 <= t mod 10 <= 5, else 1. T = 1000 has 199 change points.
SignalSpec gen_extreme_teeth(std::size_t T = 1000);

/// 0,0,0,0,1,1,1 repeated 100 times: T = 700, 199 change points.
SignalSpec gen_extreme_extreme_teeth();

/// Built-in signal by name ("extreme.teeth", "extreme.extreme.teeth").
SignalSpec builtin_signal(const std::string& name);
std::vector<std::string> builtin_signal_names();

enum class NoiseFamily { gaussian, student_t };

struct NoiseSpec {
    NoiseFamily family = NoiseFamily::gaussian;
    double sigma = 0.0;  // marginal standard deviation
    double df = 5.0;     // student_t only, must exceed 2
};

/// i.i.d. noise with standard deviation sigma. Student-t draws are scaled by
/// sigma * sqrt((df - 2) / df).
std::vector<double> gen_noise(const NoiseSpec& spec, std::size_t T, Rng& rng);

/// Per-replicate errors of one fitted model against the truth.
struct RepRecord {
    long long n_error = 0;  // N-hat - N
    double abs_error = 0.0;
    double sq_error = 0.0;
    double mse_f = 0.0;  // mean over t of (fit_t - f_t)^2
    double seconds = 0.0;
};

RepRecord evaluate(const ChangePointModel& model, const SignalSpec& truth, const TimeSeries& data,
                   double elapsed_seconds);

struct BenchReport {
    std::string method;
    double bias_n = 0.0;  // mean(N-hat - N)
    double mae_n = 0.0;   // mean |N-hat - N|
    double mse_n = 0.0;   // mean (N-hat - N)^2
    double mse_f = 0.0;   // mean over reps of the per-rep fit MSE
    double mean_time_sec = 0.0;
    std::size_t reps = 0;      // successful replicates
    std::size_t failures = 0;  // replicates where the method threw
    std::vector<std::size_t> n_hats;  // N-hat per successful replicate
};

/// Aggregates per-replicate records into a report.
BenchReport aggregate(std::string method, std::span<const RepRecord> records, std::size_t failures,
                      std::size_t n_true);

/// A detection method runnable inside the bench harness.
struct BenchMethod {
    std::string name;
    std::function<ChangePointModel(const TimeSeries&, std::uint64_t seed)> run;
};

/// Registered methods: wbs2-sdll-90, wbs2-sdll-95 (and -median9 ensembles),
/// wbs-c1.0, wbs-c1.3, wbs-bic, binseg.
BenchMethod bench_method(const std::string& name);
std::vector<std::string> bench_method_names();

/// Monte-Carlo comparison. Replicate r uses noise from derive_seed(seed, r),
/// shared by every method, so results do not depend on `jobs`.
std::vector<BenchReport> run_bench(std::span<const BenchMethod> methods, const SignalSpec& signal,
                                   const NoiseSpec& noise, std::size_t reps, std::uint64_t seed,
                                   int jobs = 1);

/// Noisy replicate r of a bench run, plus the seed handed to each method.
struct Replicate {
    TimeSeries data;
    std::uint64_t method_seed = 0;
};
Replicate make_replicate(const SignalSpec& signal, const NoiseSpec& noise, std::uint64_t seed,
                         std::size_t index);

/// Tab-separated table: method, biasN, maeN, mseN, mseF, meanTimeSec, reps, failures.
void write_bench_table(std::ostream& out, std::span<const BenchReport> reports);

/// Reads either "segmentLength value" rows or a raw one-value-per-line series.
/// Blank lines and lines starting with '#' are skipped.
SignalSpec load_signal_spec(std::istream& in, std::string name = "file");

/// Run-length form of a signal, readable by load_signal_spec.
void write_signal_spec(std::ostream& out, const SignalSpec& signal);

}  // namespace wbs2
