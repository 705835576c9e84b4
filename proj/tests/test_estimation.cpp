#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "wbs2/estimation.hpp"
#include "wbs2/sdll.hpp"
#include "wbs2/simlab.hpp"

using namespace wbs2;

namespace {

std::vector<double> gaussian(std::size_t T, Rng& rng, double sd = 1.0) {
    std::vector<double> v(T);
    for (double& a : v) a = sd * rng.normal();
    return v;
}

}  // namespace

TEST_CASE("median and quantile") {
    CHECK(median({3, 1, 2}) == 2.0);
    CHECK(median({4, 1, 3, 2}) == 2.5);
    CHECK(median({7}) == 7.0);
    CHECK_THROWS_AS(median({}), PreconditionError);
    CHECK(quantile({1, 2, 3, 4}, 0.25) == doctest::Approx(1.75));
    CHECK(quantile({1, 2, 3, 4}, 1.0) == 4.0);
    CHECK(quantile({1, 2, 3, 4}, 0.0) == 1.0);
    CHECK_THROWS_AS(quantile({1, 2}, 1.5), PreconditionError);
}

TEST_CASE("noise scale on constant and short inputs") {
    const TimeSeries flat(std::vector<double>(50, 2.0));
    CHECK(mad(flat) == 0.0);
    CHECK(iqr_estimator(flat) == 0.0);
    CHECK_THROWS_AS(mad(TimeSeries({1.0})), PreconditionError);
    CHECK_THROWS_AS(iqr_estimator(TimeSeries({1.0})), PreconditionError);
}

TEST_CASE("mad by hand") {
    // differences 1,1,-4,1 scaled by 1/sqrt(2); median 1/sqrt2, deviations 0,0,5/sqrt2,0
    const TimeSeries x({0, 1, 2, -2, -1});
    CHECK(mad(x) == 0.0);
    // differences 2,-1,3: scaled median 2/sqrt2, deviations 0,3,1 -> median 1/sqrt2
    const TimeSeries y({0, 2, 1, 4});
    CHECK(mad(y) == doctest::Approx(kMadGaussianConstant / std::sqrt(2.0)));
}

TEST_CASE("mad is scale and shift equivariant") {
    Rng rng(2);
    const auto v = gaussian(500, rng);
    const double base = mad(TimeSeries(v));
    for (double a : {0.5, 3.0, -2.0}) {
        std::vector<double> w(v);
        for (double& t : w) t = a * t + 17.0;
        CHECK(mad(TimeSeries(w)) == doctest::Approx(std::abs(a) * base).epsilon(1e-9));
    }
}

TEST_CASE("Gaussian consistency") {
    Rng rng(10);
    double total = 0.0;
    for (int r = 0; r < 100; ++r) total += mad(TimeSeries(gaussian(1000, rng, 0.3)));
    CHECK(std::abs(total / 100.0 - 0.3) <= 0.02);

    const double iqr = iqr_estimator(TimeSeries(gaussian(10000, rng)));
    CHECK(std::abs(iqr - 1.0) <= 0.05);
}

TEST_CASE("frequent jumps inflate both estimators") {
    const auto sig = gen_extreme_teeth();
    Rng rng(12);
    double m = 0.0;
    double q = 0.0;
    for (int r = 0; r < 100; ++r) {
        auto v = sig.values;
        for (double& a : v) a += 0.3 * rng.normal();
        m += mad(TimeSeries(v));
        q += iqr_estimator(TimeSeries(v));
    }
    m /= 100.0;
    q /= 100.0;
    CHECK(m > 0.35);
    CHECK(m < 0.40);
    CHECK(q > 0.33);
}

TEST_CASE("constant interpolation") {
    const ConstantTable two{{{10, 2.0}, {1000, 1.0}}, 0.9};
    CHECK(interpolate_constant(two, 100) == doctest::Approx(1.5));
    CHECK(interpolate_constant(two, 1) == 2.0);
    CHECK(interpolate_constant(two, 10) == 2.0);
    CHECK(interpolate_constant(two, 1000000) == 1.0);
    // continuous and monotone between anchors
    double prev = 3.0;
    for (std::size_t T = 10; T <= 1000; T += 7) {
        const double c = interpolate_constant(two, T);
        CHECK(c <= prev);
        prev = c;
    }

    const auto& t90 = default_constant_table(0.9);
    const auto& t95 = default_constant_table(0.95);
    CHECK(std::abs(interpolate_constant(t90, 10) - 1.42) <= 0.05);
    CHECK(std::abs(interpolate_constant(t90, 1000000) - 1.135) <= 0.05);
    CHECK(std::abs(interpolate_constant(t95, 5) - 1.55) <= 0.05);
    CHECK(std::abs(interpolate_constant(t95, 100000) - 1.17) <= 0.05);
    for (const auto& [T, c] : t90.anchors) CHECK(interpolate_constant(t95, T) > c);
    CHECK_THROWS_AS(default_constant_table(0.8), PreconditionError);
}

TEST_CASE("table validation") {
    CHECK_THROWS_AS((ConstantTable{{}, 0.9}.validate()), PreconditionError);
    CHECK_THROWS_AS((ConstantTable{{{10, 1.0}, {10, 0.9}}, 0.9}.validate()), PreconditionError);
    CHECK_THROWS_AS((ConstantTable{{{10, -1.0}}, 0.9}.validate()), PreconditionError);
    CHECK_THROWS_AS((ConstantTable{{{10, 1.0}}, 1.0}.validate()), PreconditionError);
}

TEST_CASE("table text round trip") {
    const ConstantTable t{{{10, 1.5}, {100, 1.25}, {5000, 1.125}}, 0.95};
    std::stringstream s;
    write_constant_table(s, t);
    CHECK(s.str() == "# level=0.95\n# T cTilde\n10 1.5\n100 1.25\n5000 1.125\n");
    CHECK(read_constant_table(s) == t);
}

TEST_CASE("table parse errors carry line numbers") {
    auto line_of = [](const std::string& text) {
        std::istringstream in(text);
        try {
            read_constant_table(in);
        } catch (const ParseError& e) {
            return e.line();
        }
        return std::size_t{0};
    };
    CHECK(line_of("# level=0.9\n10 1.4\nabc\n") == 3);
    CHECK(line_of("# level=0.9\n10 1.4 7\n") == 2);
    CHECK(line_of("# level=0.9\n10 -1\n") == 2);
    CHECK(line_of("10 1.4\n") == 1);
    CHECK(line_of("# level=0.9\n100 1.4\n10 1.5\n") == 3);
}

TEST_CASE("smallest constant for a level") {
    std::vector<double> r;
    for (int i = 1; i <= 100; ++i) r.push_back(i / 100.0);
    // 90 of 100 ratios must be strictly below c: c in (0.90, 0.91]
    const double c = smallest_constant_for_level(r, 0.9, 1e-4);
    CHECK(c > 0.90);
    CHECK(c <= 0.9101);
    const double loose = smallest_constant_for_level(r, 0.9);
    CHECK(loose > 0.90);
    CHECK(loose <= 0.905 + 0.005);
    CHECK(smallest_constant_for_level(r, 0.95) >= loose);

    std::vector<double> big{3.7, 12.0, 0.5};
    CHECK(smallest_constant_for_level(big, 0.9) > 12.0);

    const std::vector<double> bad{std::numeric_limits<double>::infinity()};
    CHECK_THROWS_AS(smallest_constant_for_level(bad, 0.5), CalibrationError);
    CHECK_THROWS_AS(smallest_constant_for_level(r, 1.0), PreconditionError);
    CHECK_THROWS_AS(smallest_constant_for_level({}, 0.5), PreconditionError);
}

TEST_CASE("null ratio below the constant exactly when detect returns nothing") {
    const std::size_t T = 200;
    const auto ratios = null_statistic_ratios(T, 40, 5);
    // Rebuild the same series and compare against the full pipeline.
    for (std::size_t r = 0; r < ratios.size(); ++r) {
        Rng rng(derive_seed(5, r));
        std::vector<double> v(T);
        for (double& a : v) a = rng.normal();
        const std::uint64_t path_seed = rng.next();
        for (double c : {0.9, 1.1, 1.3, 1.5}) {
            SdllConfig sc;
            sc.threshold_constant = c;
            sc.sigma_hat = 1.0;
            const auto m = detect(TimeSeries(v), Wbs2Config{100, path_seed, true, 1}, sc);
            CHECK((m.n_hat == 0) == (ratios[r] < c));
        }
    }
}

TEST_CASE("calibration is reproducible and ordered by level") {
    const std::vector<std::size_t> grid{10, 200};
    CalibrationOptions o;
    o.reps = 200;
    o.seed = 3;
    const auto a = calibrate_constant(grid, 0.9, o);
    const auto b = calibrate_constant(grid, 0.9, o);
    CHECK(a == b);
    const auto hi = calibrate_constant(grid, 0.95, o);
    for (std::size_t i = 0; i < grid.size(); ++i) CHECK(hi.anchors[i].second >= a.anchors[i].second);
    CHECK(a.anchors[0].second > a.anchors[1].second);

    o.jobs = 3;
    CHECK(calibrate_constant(grid, 0.9, o) == a);

    std::vector<std::pair<std::size_t, double>> seen;
    o.progress = [&](std::size_t T, double c) { seen.emplace_back(T, c); };
    calibrate_constant(grid, 0.9, o);
    CHECK(seen == a.anchors);
    CHECK_THROWS_AS(calibrate_constant(std::vector<std::size_t>{}, 0.9, o), PreconditionError);
}
