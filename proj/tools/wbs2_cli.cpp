// Command-line front end: detect, path, calibrate, bench, simulate.
//
// Exit codes: 0 success, 1 usage error, 2 data error, 3 numerical or
// calibration failure.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wbs2/baselines.hpp"
#include "wbs2/estimation.hpp"
#include "wbs2/parallel.hpp"
#include "wbs2/sdll.hpp"
#include "wbs2/series_io.hpp"
#include "wbs2/simlab.hpp"
#include "wbs2/solution_path.hpp"

namespace {

enum ExitCode : int { kOk = 0, kUsage = 1, kData = 2, kNumerical = 3 };

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NumericalFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SeriesOptions {
    std::string input;
    std::optional<std::size_t> column;
};

struct DetectOptions {
    SeriesOptions series;
    std::uint64_t seed = 1;
    std::size_t m_tilde = 100;
    double level = 0.9;
    std::optional<double> constant;
    std::string table;
    double beta = 0.3;
    std::optional<double> sigma;
    std::size_t ensemble = 0;
    int jobs = 1;
};

struct PathOptions {
    SeriesOptions series;
    std::uint64_t seed = 1;
    std::size_t m_tilde = 100;
    bool check_complete = false;
    bool check_sorted = false;
    int jobs = 1;
};

struct CalibrateOptions {
    std::vector<std::size_t> grid{10, 50, 100, 500, 1000, 5000, 10000};
    double level = 0.9;
    std::size_t reps = 1000;
    std::uint64_t seed = 1;
    std::size_t m_tilde = 100;
    std::string scale = "known";
    std::string output;
    int jobs = 1;
};

struct NoiseOptions {
    std::string signal = "extreme.teeth";
    std::size_t length = 0;
    double sigma = 0.3;
    std::string noise = "gaussian";
    double df = 5.0;
    std::uint64_t seed = 1;
};

struct BenchOptions {
    NoiseOptions data;
    std::size_t reps = 100;
    std::vector<std::string> methods{"wbs2-sdll-90", "wbs2-sdll-95"};
    std::string output;
    int jobs = 1;
};

struct SimulateOptions {
    NoiseOptions data;
    std::string output;
};

wbs2::TimeSeries load_series(const SeriesOptions& opt) {
    std::vector<double> values;
    if (opt.input.empty() || opt.input == "-") {
        values = wbs2::read_series(std::cin, opt.column);
    } else {
        std::ifstream in(opt.input);
        if (!in) throw wbs2::InputError("cannot open '" + opt.input + "'");
        values = wbs2::read_series(in, opt.column);
    }
    if (values.size() < 2) {
        throw wbs2::InputError("series has " + std::to_string(values.size()) +
                               " value(s); at least 2 are needed");
    }
    return wbs2::TimeSeries(std::move(values));
}

void add_series_options(CLI::App* cmd, SeriesOptions& opt) {
    cmd->add_option("input", opt.input, "Series file, one value per line ('-' or omitted: stdin)");
    cmd->add_option("--col", opt.column, "Read a comma-separated file, taking this 1-based column")
        ->check(CLI::PositiveNumber);
}

double threshold_constant(const DetectOptions& opt, std::size_t T) {
    if (opt.constant) return *opt.constant;
    if (!opt.table.empty()) {
        std::ifstream in(opt.table);
        if (!in) throw wbs2::InputError("cannot open table '" + opt.table + "'");
        return wbs2::interpolate_constant(wbs2::read_constant_table(in), T);
    }
    if (std::abs(opt.level - 0.9) > 1e-9 && std::abs(opt.level - 0.95) > 1e-9) {
        throw UsageError("--level must be 0.9 or 0.95 (or pass --constant / --table)");
    }
    return wbs2::interpolate_constant(wbs2::default_constant_table(opt.level), T);
}

void print_model(std::ostream& out, const wbs2::TimeSeries& x, const wbs2::ChangePointModel& model) {
    out << "N̂=" << model.n_hat << '\n';
    out << "locations";
    for (auto b : model.locations) out << ' ' << b;
    out << '\n';
    out << "# start end mean\n";
    wbs2::Index start = 1;
    for (std::size_t i = 0; i <= model.locations.size(); ++i) {
        const wbs2::Index end = i < model.locations.size() ? model.locations[i] : x.size();
        out << start << ' ' << end << ' ' << model.fit[start - 1] << '\n';
        start = end + 1;
    }
}

int run_detect(const DetectOptions& opt) {
    const auto x = load_series(opt.series);
    wbs2::SdllConfig sdll{threshold_constant(opt, x.size()), opt.beta, opt.sigma};
    const wbs2::Wbs2Config cfg{opt.m_tilde, opt.seed, true, wbs2::resolve_jobs(opt.jobs)};

    std::cout.precision(10);
    if (opt.ensemble == 0) {
        print_model(std::cout, x, wbs2::detect(x, cfg, sdll));
        return kOk;
    }
    const wbs2::RunDetector single = [&sdll](const wbs2::TimeSeries& data, const wbs2::Wbs2Config& c) {
        return wbs2::detect(data, c, sdll);
    };
    const auto result = wbs2::median_run_ensemble(x, cfg, single, opt.ensemble, wbs2::resolve_jobs(opt.jobs));
    print_model(std::cout, x, result.model);
    std::cout << "# ensemble runs=" << opt.ensemble << " median_run=" << result.median_run + 1
              << " seed=" << opt.seed + result.median_run << " counts=";
    for (std::size_t i = 0; i < result.counts.size(); ++i) std::cout << (i ? "," : "") << result.counts[i];
    std::cout << '\n' << "# location count\n";
    for (const auto& [b, n] : wbs2::location_histogram(result.pooled)) std::cout << b << ' ' << n << '\n';
    return kOk;
}

int run_path(const PathOptions& opt) {
    const auto x = load_series(opt.series);
    const auto path =
        wbs2::wbs2_solution_path(x, wbs2::Wbs2Config{opt.m_tilde, opt.seed, true, wbs2::resolve_jobs(opt.jobs)});
    std::cout.precision(17);
    std::cout << "# T=" << x.size() << " length=" << path.size() << '\n';
    std::cout << "k\ts\te\tb\tstat\n";
    for (std::size_t k = 0; k < path.size(); ++k) {
        const auto& p = path.entries[k];
        std::cout << k + 1 << '\t' << p.s << '\t' << p.e << '\t' << p.b << '\t' << p.stat << '\n';
    }
    if (opt.check_complete && path.size() != x.size() - 1) {
        throw NumericalFailure("path length " + std::to_string(path.size()) + " != T-1 = " +
                               std::to_string(x.size() - 1));
    }
    if (opt.check_sorted && !path.is_sorted()) throw NumericalFailure("path statistics are not non-increasing");
    return kOk;
}

int run_calibrate(const CalibrateOptions& opt) {
    if (!(opt.level > 0.0 && opt.level < 1.0)) throw UsageError("--level must lie in (0, 1)");
    for (auto T : opt.grid) {
        if (T < 2) throw UsageError("grid sizes must be >= 2");
    }
    if (opt.reps < 100) {
        std::cerr << "warning: " << opt.reps << " replicates give an imprecise constant (use >= 1000)\n";
    }
    wbs2::CalibrationOptions copt;
    copt.reps = opt.reps;
    copt.seed = opt.seed;
    copt.m_tilde = opt.m_tilde;
    copt.jobs = wbs2::resolve_jobs(opt.jobs);
    if (opt.scale == "known") {
        copt.scale = wbs2::CalibrationScale::known;
    } else if (opt.scale == "mad") {
        copt.scale = wbs2::CalibrationScale::mad;
    } else {
        throw UsageError("--scale must be 'known' or 'mad'");
    }
    copt.progress = [](std::size_t T, double c) { std::cerr << "T=" << T << " cTilde=" << c << std::endl; };
    const auto table = wbs2::calibrate_constant(opt.grid, opt.level, copt);
    if (opt.output.empty()) {
        wbs2::write_constant_table(std::cout, table);
    } else {
        std::ofstream out(opt.output);
        if (!out) throw wbs2::InputError("cannot write '" + opt.output + "'");
        wbs2::write_constant_table(out, table);
    }
    return kOk;
}

wbs2::SignalSpec resolve_signal(const NoiseOptions& opt) {
    const auto names = wbs2::builtin_signal_names();
    if (std::find(names.begin(), names.end(), opt.signal) != names.end()) {
        if (opt.signal == "extreme.teeth" && opt.length != 0) return wbs2::gen_extreme_teeth(opt.length);
        return wbs2::builtin_signal(opt.signal);
    }
    if (!std::filesystem::exists(opt.signal)) {
        std::string valid;
        for (const auto& n : names) valid += (valid.empty() ? "" : ", ") + n;
        throw UsageError("unknown signal '" + opt.signal + "' (built-in: " + valid + ", or a spec file)");
    }
    std::ifstream in(opt.signal);
    return wbs2::load_signal_spec(in, std::filesystem::path(opt.signal).stem().string());
}

wbs2::NoiseSpec resolve_noise(const NoiseOptions& opt) {
    wbs2::NoiseSpec spec;
    spec.sigma = opt.sigma;
    spec.df = opt.df;
    if (opt.noise == "gaussian") {
        spec.family = wbs2::NoiseFamily::gaussian;
    } else if (opt.noise == "t") {
        spec.family = wbs2::NoiseFamily::student_t;
        if (!(opt.df > 2.0)) throw UsageError("--df must exceed 2");
    } else {
        throw UsageError("unknown noise '" + opt.noise + "' (valid: gaussian, t)");
    }
    if (!(opt.sigma >= 0.0)) throw UsageError("--sigma must be non-negative");
    return spec;
}

int run_bench(const BenchOptions& opt) {
    const auto signal = resolve_signal(opt.data);
    const auto noise = resolve_noise(opt.data);
    std::vector<wbs2::BenchMethod> methods;
    for (const auto& name : opt.methods) {
        try {
            methods.push_back(wbs2::bench_method(name));
        } catch (const wbs2::PreconditionError& e) {
            throw UsageError(e.what());
        }
    }
    const auto reports =
        wbs2::run_bench(methods, signal, noise, opt.reps, opt.data.seed, wbs2::resolve_jobs(opt.jobs));
    wbs2::write_bench_table(std::cout, reports);
    if (!opt.output.empty()) {
        std::ofstream out(opt.output);
        if (!out) throw wbs2::InputError("cannot write '" + opt.output + "'");
        wbs2::write_bench_table(out, reports);
    }
    return kOk;
}

int run_simulate(const SimulateOptions& opt) {
    const auto signal = resolve_signal(opt.data);
    const auto noise = resolve_noise(opt.data);
    const auto rep = wbs2::make_replicate(signal, noise, opt.data.seed, 0);
    if (opt.output.empty()) {
        wbs2::write_series(std::cout, rep.data.values());
    } else {
        std::ofstream out(opt.output);
        if (!out) throw wbs2::InputError("cannot write '" + opt.output + "'");
        wbs2::write_series(out, rep.data.values());
    }
    return kOk;
}

void add_noise_options(CLI::App* cmd, NoiseOptions& opt) {
    cmd->add_option("--signal", opt.signal, "Built-in signal name or signal-spec file")->capture_default_str();
    cmd->add_option("--length", opt.length, "Length of extreme.teeth (default 1000)");
    cmd->add_option("--sigma", opt.sigma, "Noise standard deviation")->capture_default_str();
    cmd->add_option("--noise", opt.noise, "Noise family: gaussian or t")->capture_default_str();
    cmd->add_option("--df", opt.df, "Degrees of freedom for t noise")->capture_default_str();
    cmd->add_option("--seed", opt.seed, "Random seed")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"WBS2 solution path with steepest-drop-to-low-levels model selection"};
    app.require_subcommand(1);

    DetectOptions detect_opt;
    auto* detect = app.add_subcommand("detect", "Estimate change-points of a series");
    add_series_options(detect, detect_opt.series);
    detect->add_option("--seed", detect_opt.seed, "Random seed")->capture_default_str();
    detect->add_option("--m-tilde", detect_opt.m_tilde, "Interval draws per sub-domain")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    auto* level = detect->add_option("--level", detect_opt.level, "Null level of the shipped table: 0.9 or 0.95")
                      ->capture_default_str();
    auto* constant = detect->add_option("--constant", detect_opt.constant, "Explicit threshold constant")
                         ->check(CLI::PositiveNumber);
    auto* table = detect->add_option("--table", detect_opt.table, "Constant table file (from 'calibrate')");
    level->excludes(constant)->excludes(table);
    constant->excludes(table);
    detect->add_option("--beta", detect_opt.beta, "Low-level fraction beta in (0,1)")->capture_default_str();
    detect->add_option("--sigma", detect_opt.sigma, "Noise scale (default: MAD estimate)");
    detect->add_option("--ensemble", detect_opt.ensemble, "Median run over R runs with pooled histogram");
    detect->add_option("--jobs", detect_opt.jobs, "Threads (0: all)")->capture_default_str();

    PathOptions path_opt;
    auto* path = app.add_subcommand("path", "Dump the sorted WBS2 solution path");
    add_series_options(path, path_opt.series);
    path->add_option("--seed", path_opt.seed, "Random seed")->capture_default_str();
    path->add_option("--m-tilde", path_opt.m_tilde, "Interval draws per sub-domain")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    path->add_flag("--check-complete", path_opt.check_complete, "Fail unless the path has T-1 entries");
    path->add_flag("--check-sorted", path_opt.check_sorted, "Fail unless statistics are non-increasing");
    path->add_option("--jobs", path_opt.jobs, "Threads (0: all)")->capture_default_str();

    CalibrateOptions cal_opt;
    auto* calibrate = app.add_subcommand("calibrate", "Monte-Carlo calibration of the threshold constant");
    calibrate->add_option("--grid", cal_opt.grid, "Sample sizes")->delimiter(',')->capture_default_str();
    calibrate->add_option("--level", cal_opt.level, "Target P(no detection) on pure noise")->capture_default_str();
    calibrate->add_option("--reps", cal_opt.reps, "Simulations per sample size")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    calibrate->add_option("--seed", cal_opt.seed, "Random seed")->capture_default_str();
    calibrate->add_option("--m-tilde", cal_opt.m_tilde, "Interval draws per sub-domain")->capture_default_str();
    calibrate->add_option("--scale", cal_opt.scale, "Noise scale used on the null series: known or mad")
        ->capture_default_str();
    calibrate->add_option("--output,-o", cal_opt.output, "Table file (default: stdout)");
    calibrate->add_option("--jobs", cal_opt.jobs, "Threads (0: all)")->capture_default_str();

    BenchOptions bench_opt;
    auto* bench = app.add_subcommand("bench", "Monte-Carlo accuracy and timing comparison");
    add_noise_options(bench, bench_opt.data);
    bench->add_option("--reps", bench_opt.reps, "Simulated sample paths")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    bench->add_option("--methods", bench_opt.methods, "Comma-separated method names")
        ->delimiter(',')
        ->capture_default_str();
    bench->add_option("--output,-o", bench_opt.output, "Also write the table to this file");
    bench->add_option("--jobs", bench_opt.jobs, "Threads (0: all)")->capture_default_str();

    SimulateOptions sim_opt;
    auto* simulate = app.add_subcommand("simulate", "Write one noisy realisation, one value per line");
    add_noise_options(simulate, sim_opt.data);
    simulate->add_option("--output,-o", sim_opt.output, "Output file (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*detect) return run_detect(detect_opt);
        if (*path) return run_path(path_opt);
        if (*calibrate) return run_calibrate(cal_opt);
        if (*bench) return run_bench(bench_opt);
        if (*simulate) return run_simulate(sim_opt);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const wbs2::InputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kData;
    } catch (const wbs2::CalibrationError& e) {
        std::cerr << "calibration failed: " << e.what() << '\n';
        return kNumerical;
    } catch (const NumericalFailure& e) {
        std::cerr << "check failed: " << e.what() << '\n';
        return kNumerical;
    } catch (const wbs2::PreconditionError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    }
    return kUsage;
}
