// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include <omp.h>

#include "wbs2/estimation.hpp"
#include "wbs2/parallel.hpp"
#include "wbs2/simlab.hpp"
#include "wbs2/solution_path.hpp"

namespace {

wbs2::TimeSeries noise_series(std::size_t T, std::uint64_t seed) {
    wbs2::Rng rng(seed);
    std::vector<double> v(T);
    for (double& x : v) x = rng.normal();
    return wbs2::TimeSeries(std::move(v));
}

void BM_BestCandidateSerial(benchmark::State& state) {
    const auto T = static_cast<std::size_t>(state.range(0));
    const auto x = noise_series(T, 1);
    wbs2::Rng rng(2);
    const auto intervals = wbs2::draw_intervals(1, T, 100, rng);
    for (auto _ : state) benchmark::DoNotOptimize(wbs2::best_candidate_serial(x, intervals));
    state.SetItemsProcessed(state.iterations() * static_cast<long long>(intervals.size()));
}

void BM_BestCandidateOmp(benchmark::State& state) {
    const auto T = static_cast<std::size_t>(state.range(0));
    const auto x = noise_series(T, 1);
    wbs2::Rng rng(2);
    const auto intervals = wbs2::draw_intervals(1, T, 100, rng);
    const int jobs = omp_get_max_threads();
    for (auto _ : state) benchmark::DoNotOptimize(wbs2::best_candidate_omp(x, intervals, jobs));
    state.SetItemsProcessed(state.iterations() * static_cast<long long>(intervals.size()));
}

void BM_SolutionPath(benchmark::State& state) {
    const auto T = static_cast<std::size_t>(state.range(0));
    const auto x = noise_series(T, 3);
    const int jobs = wbs2::resolve_jobs(static_cast<int>(state.range(1)));
    for (auto _ : state) benchmark::DoNotOptimize(wbs2::wbs2_solution_path(x, {100, 4, true, jobs}));
    state.SetComplexityN(state.range(0));
}

void BM_NullCalibration(benchmark::State& state) {
    const int jobs = wbs2::resolve_jobs(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(wbs2::null_statistic_ratios(1000, 64, 5, 100, jobs));
}

void BM_Bench(benchmark::State& state) {
    const int jobs = wbs2::resolve_jobs(static_cast<int>(state.range(0)));
    const auto signal = wbs2::gen_extreme_teeth();
    const std::vector<wbs2::BenchMethod> methods{wbs2::bench_method("wbs2-sdll-90")};
    for (auto _ : state) {
        benchmark::DoNotOptimize(wbs2::run_bench(methods, signal, {wbs2::NoiseFamily::gaussian, 0.3, 5.0}, 16, 1, jobs));
    }
}

}  // namespace

BENCHMARK(BM_BestCandidateSerial)->Arg(1 << 14)->Arg(1 << 17)->Arg(1 << 20);
BENCHMARK(BM_BestCandidateOmp)->Arg(1 << 14)->Arg(1 << 17)->Arg(1 << 20);
BENCHMARK(BM_SolutionPath)
    ->ArgsProduct({{1000, 10000, 100000}, {1, 0}})
    ->Unit(benchmark::kMillisecond);
BENCHMARK(BM_NullCalibration)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Bench)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
