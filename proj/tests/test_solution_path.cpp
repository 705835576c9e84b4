#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "wbs2/estimation.hpp"
#include "wbs2/sdll.hpp"
#include "wbs2/simlab.hpp"
#include "wbs2/solution_path.hpp"

using namespace wbs2;

namespace {

std::vector<double> gaussian(std::size_t T, std::uint64_t seed, double sd = 1.0) {
    Rng rng(seed);
    std::vector<double> v(T);
    for (double& a : v) a = sd * rng.normal();
    return v;
}

bool is_permutation_of_split_points(const SolutionPath& path, std::size_t T) {
    if (T < 2) return path.empty();
    if (path.size() != T - 1) return false;
    auto b = path.locations();
    std::sort(b.begin(), b.end());
    for (std::size_t i = 0; i < b.size(); ++i) {
        if (b[i] != i + 1) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("draw_intervals examples") {
    Rng rng(1);
    CHECK(draw_intervals(1, 3, 100, rng) == std::vector<Interval>{{1, 2}, {1, 3}, {2, 3}});
    CHECK(draw_intervals(1, 2, 5, rng) == std::vector<Interval>{{1, 2}});

    const auto many = draw_intervals(1, 1000, 100, rng);
    REQUIRE(many.size() == 100);
    for (const auto& iv : many) {
        CHECK(iv.s >= 1);
        CHECK(iv.s < iv.e);
        CHECK(iv.e <= 1000);
    }

    const auto inner = draw_intervals(40, 60, 30, rng);
    for (const auto& iv : inner) CHECK((iv.s >= 40 && iv.s < iv.e && iv.e <= 60));

    CHECK_THROWS_AS(draw_intervals(5, 5, 10, rng), PreconditionError);
    CHECK_THROWS_AS(draw_intervals(1, 5, 0, rng), PreconditionError);
}

TEST_CASE("draws are reproducible from the seed") {
    Rng a(42), b(42);
    CHECK(draw_intervals(1, 500, 50, a) == draw_intervals(1, 500, 50, b));
}

TEST_CASE("solution path base cases") {
    CHECK(wbs2_solution_path(TimeSeries(std::vector<double>{}), {}).empty());
    CHECK(wbs2_solution_path(TimeSeries({3.0}), {}).empty());
    const auto p = wbs2_solution_path(TimeSeries({0.0, 1.0}), {});
    REQUIRE(p.size() == 1);
    CHECK(p.entries[0].s == 1);
    CHECK(p.entries[0].e == 2);
    CHECK(p.entries[0].b == 1);
    CHECK(p.entries[0].stat == doctest::Approx(1.0 / std::sqrt(2.0)));
}

TEST_CASE("noiseless teeth: the top 199 entries are the true change points") {
    const auto sig = gen_extreme_teeth();
    for (std::uint64_t seed : {0u, 1u, 17u}) {
        const auto path = wbs2_solution_path(TimeSeries(sig.values), Wbs2Config{100, seed, true, 1});
        REQUIRE(path.size() == 999);
        std::vector<Index> top;
        for (std::size_t k = 0; k < 199; ++k) top.push_back(path.entries[k].b);
        std::sort(top.begin(), top.end());
        CHECK(top == sig.change_points);
    }
}

TEST_CASE("completeness, ordering and nesting on random inputs") {
    Rng meta(2024);
    for (int rep = 0; rep < 60; ++rep) {
        const std::size_t T = 1 + meta.uniform_int(0, 400);
        const std::size_t m_tilde = 1 + meta.uniform_int(0, 60);
        const bool full = meta.uniform_int(0, 1) == 1;
        const TimeSeries x(gaussian(T, meta.next()));
        const auto path = wbs2_solution_path(x, Wbs2Config{m_tilde, meta.next(), full, 1});
        REQUIRE(is_permutation_of_split_points(path, T));
        CHECK(path.is_sorted());
        for (const auto& p : path.entries) {
            REQUIRE(p.s <= p.b);
            REQUIRE(p.b < p.e);
            REQUIRE(p.e <= T);
            REQUIRE(p.stat == doctest::Approx(std::abs(cusum_at(x, p.s, p.e, p.b))));
        }
    }
}

TEST_CASE("no two entries cut each other's interval") {
    // Rebuild the partition tree: an entry's interval never straddles the
    // split point of any ancestor, so for every pair either the intervals are
    // disjoint from the other's split or one is an ancestor.
    const TimeSeries x(gaussian(300, 9));
    const auto path = wbs2_solution_path(x, Wbs2Config{20, 3, true, 1});
    for (const auto& p : path.entries) {
        for (const auto& q : path.entries) {
            if (&p == &q) continue;
            const bool q_splits_p = p.s <= q.b && q.b < p.e;
            const bool p_splits_q = q.s <= p.b && p.b < q.e;
            // two splits cannot each cut the other's interval
            CHECK_FALSE((q_splits_p && p_splits_q));
        }
    }
}

TEST_CASE("seed determinism") {
    const TimeSeries x(gaussian(800, 5));
    const Wbs2Config cfg{50, 77, true, 1};
    CHECK(wbs2_solution_path(x, cfg) == wbs2_solution_path(x, cfg));
    const Wbs2Config other{50, 78, true, 1};
    CHECK_FALSE(wbs2_solution_path(x, cfg) == wbs2_solution_path(x, other));
}

TEST_CASE("serial and OpenMP kernels agree") {
    Rng rng(8);
    for (int rep = 0; rep < 30; ++rep) {
        const std::size_t T = 50 + rng.uniform_int(0, 2000);
        const TimeSeries x(gaussian(T, rng.next()));
        const auto iv = draw_intervals(1, T, 1 + rng.uniform_int(0, 400), rng);
        CHECK(best_candidate_serial(x, iv) == best_candidate_omp(x, iv, 4));
    }
    // repeated intervals make ties; the lowest index must win in both
    const TimeSeries x(gaussian(100, 1));
    const std::vector<Interval> dup{{3, 60}, {3, 60}, {3, 60}, {3, 60}, {3, 60}};
    CHECK(best_candidate_serial(x, dup) == best_candidate_omp(x, dup, 3));
}

TEST_CASE("solution path is identical with parallel domains") {
    const TimeSeries x(gaussian(20000, 12));
    const Wbs2Config serial{100, 4, true, 1};
    const Wbs2Config parallel{100, 4, true, 4};
    CHECK(wbs2_solution_path(x, serial) == wbs2_solution_path(x, parallel));
}

TEST_CASE("m_tilde must be positive") {
    CHECK_THROWS_AS(wbs2_solution_path(TimeSeries({1, 2, 3}), Wbs2Config{0, 0, true, 1}), PreconditionError);
}

TEST_CASE("ensemble with one run equals a single run") {
    const auto sig = gen_extreme_teeth();
    Rng rng(3);
    auto v = sig.values;
    for (double& a : v) a += 0.3 * rng.normal();
    const TimeSeries x(v);
    const RunDetector det = [](const TimeSeries& s, const Wbs2Config& c) {
        SdllConfig sc;
        sc.threshold_constant = 1.2;
        return detect(s, c, sc);
    };
    const Wbs2Config cfg{100, 21, true, 1};
    const auto ens = median_run_ensemble(x, cfg, det, 1);
    const auto single = det(x, cfg);
    CHECK(ens.model.locations == single.locations);
    CHECK(ens.counts == std::vector<std::size_t>{single.n_hat});
    CHECK(ens.pooled == single.locations);
}

TEST_CASE("ensemble on a noiseless step") {
    std::vector<double> v(100, 0.0);
    std::fill(v.begin() + 50, v.end(), 2.0);
    const TimeSeries x(v);
    const RunDetector det = [](const TimeSeries& s, const Wbs2Config& c) { return detect(s, c, SdllConfig{}); };
    const auto ens = median_run_ensemble(x, Wbs2Config{}, det, 9, 3);
    CHECK(ens.model.locations == std::vector<Index>{50});
    const auto hist = location_histogram(ens.pooled);
    REQUIRE(hist.size() == 1);
    CHECK(hist[0] == std::pair<Index, std::size_t>{50, 9});
}

TEST_CASE("ensemble picks the lower median and the first run reaching it") {
    const TimeSeries x({1, 2, 3, 4, 5});
    const RunDetector det = [](const TimeSeries& s, const Wbs2Config& c) {
        // counts 3,1,2,1 for seeds 0..3
        static const std::vector<std::vector<Index>> locs{{1, 2, 3}, {2}, {1, 4}, {3}};
        return fit_piecewise_mean(s, locs[c.seed]);
    };
    const auto ens = median_run_ensemble(x, Wbs2Config{}, det, 4);
    CHECK(ens.counts == std::vector<std::size_t>{3, 1, 2, 1});
    CHECK(ens.median_run == 1);
    CHECK(ens.model.locations == std::vector<Index>{2});
    CHECK(ens.pooled == std::vector<Index>{1, 1, 2, 2, 3, 3, 4});
    CHECK_THROWS_AS(median_run_ensemble(x, Wbs2Config{}, det, 0), PreconditionError);
}

TEST_CASE("ensemble median on teeth lies in the single-run interquartile range") {
    const auto sig = gen_extreme_teeth();
    const RunDetector det = [](const TimeSeries& s, const Wbs2Config& c) {
        SdllConfig sc;
        sc.threshold_constant = interpolate_constant(default_constant_table(0.9), s.size());
        return detect(s, c, sc);
    };
    Rng rng(99);
    auto v = sig.values;
    for (double& a : v) a += 0.3 * rng.normal();
    const TimeSeries x(v);
    std::vector<double> singles;
    for (std::uint64_t s = 1000; s < 1100; ++s) singles.push_back(static_cast<double>(det(x, Wbs2Config{100, s, true, 1}).n_hat));
    const double q1 = quantile(singles, 0.25);
    const double q3 = quantile(singles, 0.75);
    const auto ens = median_run_ensemble(x, Wbs2Config{100, 5, true, 1}, det, 9);
    const double med = static_cast<double>(ens.model.n_hat);
    CHECK(med >= q1);
    CHECK(med <= q3);
}
