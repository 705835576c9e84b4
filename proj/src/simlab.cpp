#include "wbs2/simlab.hpp"

#include <chrono>
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "wbs2/baselines.hpp"
#include "wbs2/estimation.hpp"
#include "wbs2/parallel.hpp"
#include "wbs2/sdll.hpp"
#include "wbs2/solution_path.hpp"

namespace wbs2 {

std::vector<Index> jump_locations(std::span<const double> values) {
    std::vector<Index> out;
    for (std::size_t t = 0; t + 1 < values.size(); ++t) {
        if (values[t + 1] != values[t]) out.push_back(t + 1);
    }
    return out;
}

SignalSpec make_signal(std::string name, std::vector<double> values) {
    SignalSpec spec;
    spec.name = std::move(name);
    spec.change_points = jump_locations(values);
    spec.values = std::move(values);
    return spec;
}

SignalSpec gen_extreme_teeth(std::size_t T) {
    if (T < 10) throw PreconditionError("extreme.teeth needs T >= 10");
    std::vector<double> f(T);
    for (std::size_t t = 1; t <= T; ++t) {
        const std::size_t r = t % 10;
        f[t - 1] = (r >= 1 && r <= 5) ? 0.0 : 1.0;
    }
    return make_signal("extreme.teeth", std::move(f));
}

SignalSpec gen_extreme_extreme_teeth() {
    constexpr double pattern[] = {0, 0, 0, 0, 1, 1, 1};
    std::vector<double> f;
    f.reserve(700);
    for (int rep = 0; rep < 100; ++rep) f.insert(f.end(), std::begin(pattern), std::end(pattern));
    return make_signal("extreme.extreme.teeth", std::move(f));
}

std::vector<std::string> builtin_signal_names() { return {"extreme.teeth", "extreme.extreme.teeth"}; }

SignalSpec builtin_signal(const std::string& name) {
    if (name == "extreme.teeth") return gen_extreme_teeth();
    if (name == "extreme.extreme.teeth") return gen_extreme_extreme_teeth();
    throw PreconditionError("unknown signal '" + name + "'");
}

std::vector<double> gen_noise(const NoiseSpec& spec, std::size_t T, Rng& rng) {
    if (!(spec.sigma >= 0.0)) throw PreconditionError("noise sigma must be non-negative");
    if (spec.family == NoiseFamily::student_t && !(spec.df > 2.0)) {
        throw PreconditionError("student-t noise needs df > 2 for a finite variance");
    }
    std::vector<double> out(T, 0.0);
    if (spec.sigma == 0.0) return out;
    if (spec.family == NoiseFamily::gaussian) {
        for (double& v : out) v = spec.sigma * rng.normal();
    } else {
        const double scale = spec.sigma * std::sqrt((spec.df - 2.0) / spec.df);
        for (double& v : out) v = scale * rng.student_t(spec.df);
    }
    return out;
}

RepRecord evaluate(const ChangePointModel& model, const SignalSpec& truth, const TimeSeries& data,
                   double elapsed_seconds) {
    const std::size_t T = truth.values.size();
    if (model.fit.size() != T || data.size() != T) {
        throw PreconditionError("model, data and truth lengths differ");
    }
    RepRecord rec;
    rec.n_error = static_cast<long long>(model.n_hat) - static_cast<long long>(truth.n_true());
    rec.abs_error = std::abs(static_cast<double>(rec.n_error));
    rec.sq_error = rec.abs_error * rec.abs_error;
    double sse = 0.0;
    for (std::size_t t = 0; t < T; ++t) {
        const double d = model.fit[t] - truth.values[t];
        sse += d * d;
    }
    rec.mse_f = T > 0 ? sse / static_cast<double>(T) : 0.0;
    rec.seconds = elapsed_seconds;
    return rec;
}

BenchReport aggregate(std::string method, std::span<const RepRecord> records, std::size_t failures,
                      std::size_t n_true) {
    BenchReport rep;
    rep.method = std::move(method);
    rep.reps = records.size();
    rep.failures = failures;
    if (records.empty()) return rep;
    for (const auto& r : records) {
        rep.bias_n += static_cast<double>(r.n_error);
        rep.mae_n += r.abs_error;
        rep.mse_n += r.sq_error;
        rep.mse_f += r.mse_f;
        rep.mean_time_sec += r.seconds;
        rep.n_hats.push_back(static_cast<std::size_t>(static_cast<long long>(n_true) + r.n_error));
    }
    const auto n = static_cast<double>(records.size());
    rep.bias_n /= n;
    rep.mae_n /= n;
    rep.mse_n /= n;
    rep.mse_f /= n;
    rep.mean_time_sec /= n;
    return rep;
}

namespace {

ChangePointModel run_sdll(const TimeSeries& x, std::uint64_t seed, double level) {
    const SdllConfig cfg{interpolate_constant(default_constant_table(level), x.size()), 0.3, {}};
    return detect(x, Wbs2Config{100, seed, true, 1}, cfg);
}

ChangePointModel run_sdll_median(const TimeSeries& x, std::uint64_t seed, double level) {
    const RunDetector single = [level](const TimeSeries& data, const Wbs2Config& cfg) {
        return run_sdll(data, cfg.seed, level);
    };
    return median_run_ensemble(x, Wbs2Config{100, seed, true, 1}, single, 9).model;
}

}  // namespace

std::vector<std::string> bench_method_names() {
    return {"wbs2-sdll-90", "wbs2-sdll-95", "wbs2-sdll-90-median9", "wbs2-sdll-95-median9",
            "wbs-c1.0",     "wbs-c1.3",     "wbs-bic",              "binseg"};
}

BenchMethod bench_method(const std::string& name) {
    using Fn = std::function<ChangePointModel(const TimeSeries&, std::uint64_t)>;
    Fn fn;
    if (name == "wbs2-sdll-90") {
        fn = [](const TimeSeries& x, std::uint64_t s) { return run_sdll(x, s, 0.9); };
    } else if (name == "wbs2-sdll-95") {
        fn = [](const TimeSeries& x, std::uint64_t s) { return run_sdll(x, s, 0.95); };
    } else if (name == "wbs2-sdll-90-median9") {
        fn = [](const TimeSeries& x, std::uint64_t s) { return run_sdll_median(x, s, 0.9); };
    } else if (name == "wbs2-sdll-95-median9") {
        fn = [](const TimeSeries& x, std::uint64_t s) { return run_sdll_median(x, s, 0.95); };
    } else if (name == "wbs-c1.0" || name == "wbs-c1.3") {
        const double c = name == "wbs-c1.0" ? 1.0 : 1.3;
        fn = [c](const TimeSeries& x, std::uint64_t s) {
            return wbs_detect_threshold(x, WbsConfig{5000, c, s, true});
        };
    } else if (name == "wbs-bic") {
        fn = [](const TimeSeries& x, std::uint64_t s) {
            return wbs_bic_select(wbs_solution_path(x, WbsConfig{5000, 1.0, s, true}), x);
        };
    } else if (name == "binseg") {
        fn = [](const TimeSeries& x, std::uint64_t) { return binseg_detect(x, 1.0); };
    } else {
        std::string valid;
        for (const auto& n : bench_method_names()) valid += (valid.empty() ? "" : ", ") + n;
        throw PreconditionError("unknown method '" + name + "' (valid: " + valid + ")");
    }
    return {name, std::move(fn)};
}

Replicate make_replicate(const SignalSpec& signal, const NoiseSpec& noise, std::uint64_t seed,
                         std::size_t index) {
    Rng rng(derive_seed(seed, index));
    auto values = gen_noise(noise, signal.values.size(), rng);
    for (std::size_t t = 0; t < values.size(); ++t) values[t] += signal.values[t];
    const std::uint64_t method_seed = rng.next();
    return {TimeSeries(std::move(values)), method_seed};
}

std::vector<BenchReport> run_bench(std::span<const BenchMethod> methods, const SignalSpec& signal,
                                   const NoiseSpec& noise, std::size_t reps, std::uint64_t seed, int jobs) {
    if (reps == 0) throw PreconditionError("bench needs at least one replicate");
    struct Cell {
        RepRecord rec;
        bool ok = false;
    };
    std::vector<std::vector<Cell>> cells(methods.size(), std::vector<Cell>(reps));

    for_each_index(reps, jobs, [&](std::size_t r) {
        const Replicate rep = make_replicate(signal, noise, seed, r);
        for (std::size_t m = 0; m < methods.size(); ++m) {
            try {
                const auto start = std::chrono::steady_clock::now();
                const ChangePointModel model = methods[m].run(rep.data, rep.method_seed);
                const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
                cells[m][r] = {evaluate(model, signal, rep.data, elapsed.count()), true};
            } catch (const std::exception&) {
                cells[m][r].ok = false;
            }
        }
    });

    std::vector<BenchReport> reports;
    for (std::size_t m = 0; m < methods.size(); ++m) {
        std::vector<RepRecord> ok;
        for (const auto& c : cells[m]) {
            if (c.ok) ok.push_back(c.rec);
        }
        const std::size_t failures = reps - ok.size();
        reports.push_back(aggregate(methods[m].name, ok, failures, signal.n_true()));
    }
    return reports;
}

void write_bench_table(std::ostream& out, std::span<const BenchReport> reports) {
    out << "method\tbiasN\tmaeN\tmseN\tmseF\tmeanTimeSec\treps\tfailures\n";
    const auto flags = out.flags();
    const auto precision = out.precision();
    out << std::fixed;
    for (const auto& r : reports) {
        out << r.method << '\t' << std::setprecision(2) << r.bias_n << '\t' << r.mae_n << '\t' << r.mse_n
            << '\t' << std::setprecision(4) << r.mse_f << '\t' << std::setprecision(6) << r.mean_time_sec
            << '\t' << r.reps << '\t' << r.failures << '\n';
    }
    out.flags(flags);
    out.precision(precision);
}

SignalSpec load_signal_spec(std::istream& in, std::string name) {
    enum class Layout { unknown, segments, raw };
    Layout layout = Layout::unknown;
    std::vector<double> values;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        if (line[first] == '#') {
            const auto pos = line.find("name=");
            if (pos != std::string::npos) {
                std::istringstream rest(line.substr(pos + 5));
                rest >> name;
            }
            continue;
        }

        std::istringstream fields(line);
        std::vector<std::string> tokens;
        for (std::string tok; fields >> tok;) tokens.push_back(tok);
        const Layout this_line = tokens.size() == 2 ? Layout::segments
                                 : tokens.size() == 1 ? Layout::raw
                                                      : Layout::unknown;
        if (this_line == Layout::unknown) {
            throw ParseError(line_no, "expected 'segmentLength value' or a single value");
        }
        if (layout != Layout::unknown && layout != this_line) {
            throw ParseError(line_no, "mixes segment rows and raw values");
        }
        layout = this_line;

        const auto number = [&](const std::string& tok) {
            std::size_t used = 0;
            double v = 0.0;
            try {
                v = std::stod(tok, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used != tok.size() || !std::isfinite(v)) {
                throw ParseError(line_no, "'" + tok + "' is not a finite number");
            }
            return v;
        };

        if (layout == Layout::raw) {
            values.push_back(number(tokens[0]));
        } else {
            const double len = number(tokens[0]);
            if (len < 1.0 || len != std::floor(len)) {
                throw ParseError(line_no, "segment length must be a positive integer");
            }
            values.insert(values.end(), static_cast<std::size_t>(len), number(tokens[1]));
        }
    }
    if (values.empty()) throw ParseError(line_no, "no data");
    return make_signal(std::move(name), std::move(values));
}

void write_signal_spec(std::ostream& out, const SignalSpec& signal) {
    const auto precision = out.precision(std::numeric_limits<double>::max_digits10);
    out << "# name=" << signal.name << " T=" << signal.values.size() << " N=" << signal.n_true() << '\n';
    std::size_t start = 0;
    for (std::size_t t = 1; t <= signal.values.size(); ++t) {
        if (t == signal.values.size() || signal.values[t] != signal.values[start]) {
            out << (t - start) << ' ' << signal.values[start] << '\n';
            start = t;
        }
    }
    out.precision(precision);
}

}  // namespace wbs2
