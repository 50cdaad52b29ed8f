#include <benchmark/benchmark.h>

#include "svie/coeffs.hpp"
#include "svie/paths.hpp"
#include "svie/volterra_det.hpp"
#include "svie/volterra_sde.hpp"

using namespace svie;

static void BM_solve_svie(benchmark::State& state) {
    const auto N = static_cast<std::size_t>(state.range(0));
    auto bnd = builtin_coefficients("bounded_separable");
    auto g = TimeGrid::uniform(0.0, 1.0, N);
    GridPath xhat = GridPath::constant(g, Vec::Ones(1));
    std::uint64_t stream = 0;
    for (auto _ : state) {
        auto W = sample_brownian(g, 1, substream(1, stream++));
        benchmark::DoNotOptimize(solve_svie(bnd, xhat, W));
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_solve_svie)->RangeMultiplier(2)->Range(32, 256)->Complexity();

static void BM_solve_svie_time_invariant(benchmark::State& state) {
    const auto N = static_cast<std::size_t>(state.range(0));
    auto gbm = builtin_coefficients("gbm");
    auto g = TimeGrid::uniform(0.0, 1.0, N);
    GridPath xhat = GridPath::constant(g, Vec::Ones(1));
    std::uint64_t stream = 0;
    for (auto _ : state) {
        auto W = sample_brownian(g, 1, substream(2, stream++));
        benchmark::DoNotOptimize(solve_svie(gbm, xhat, W));
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_solve_svie_time_invariant)->RangeMultiplier(2)->Range(64, 1024)->Complexity();

static void BM_solve_support_vie(benchmark::State& state) {
    const auto N = static_cast<std::size_t>(state.range(0));
    auto bnd = builtin_coefficients("bounded_separable");
    auto g = TimeGrid::uniform(0.0, 1.0, N);
    GridPath xhat = GridPath::constant(g, Vec::Ones(1));
    DriverPath h = DriverPath::constant_slope(g, Vec::Constant(1, 0.5));
    for (auto _ : state) benchmark::DoNotOptimize(solve_support_vie(bnd, xhat, h));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_solve_support_vie)->RangeMultiplier(2)->Range(32, 256)->Complexity();

static void BM_hoelder_norm(benchmark::State& state) {
    const auto N = static_cast<std::size_t>(state.range(0));
    auto g = TimeGrid::uniform(0.0, 1.0, N);
    auto W = sample_brownian(g, 1, 3);
    for (auto _ : state) benchmark::DoNotOptimize(hoelder_norm(W.values, 0.25));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_hoelder_norm)->RangeMultiplier(2)->Range(64, 1024)->Complexity();

BENCHMARK_MAIN();
