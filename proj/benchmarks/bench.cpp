#include <benchmark/benchmark.h>

#include "mchain/generators.hpp"
#include "mchain/gnm.hpp"
#include "mchain/hitting.hpp"
#include "mchain/torus.hpp"

using namespace mchain;

static void BM_StationaryExact(benchmark::State& state) {
    auto chain = lazy_cycle<Rat>(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(stationary(chain));
}
BENCHMARK(BM_StationaryExact)->Arg(8)->Arg(16)->Arg(32);

static void BM_StationaryFloat(benchmark::State& state) {
    auto chain = lazy_cycle<double>(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(stationary(chain));
}
BENCHMARK(BM_StationaryFloat)->Arg(16)->Arg(64)->Arg(128);

static void BM_MixingStep(benchmark::State& state) {
    auto chain = lazy_cycle<double>(static_cast<std::size_t>(state.range(0)));
    MixingScan<double> scan(chain);
    for (auto _ : state) {
        scan.step();
        benchmark::DoNotOptimize(scan.worst_tv());
    }
}
BENCHMARK(BM_MixingStep)->Arg(16)->Arg(64);

static void BM_SurvivalStep(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    auto chain = lazy_cycle<double>(n);
    StateSet target = StateSet::interval(n, 0, n / 4);
    SurvivalVector<double> v = initial_survival(chain, n / 2, target);
    for (auto _ : state) {
        v = survival_step(chain, v, target);
        benchmark::DoNotOptimize(v.total());
    }
}
BENCHMARK(BM_SurvivalStep)->Arg(16)->Arg(64)->Arg(256);

static void BM_StaticHittingExact(benchmark::State& state) {
    GnmGraph g(2, 8);
    auto chain = g.walk_chain<Rat>(false);
    StateSet target = StateSet::singleton(chain.n(), g.vertex(2, 0, 0));
    for (auto _ : state) benchmark::DoNotOptimize(static_hitting(chain, target));
}
BENCHMARK(BM_StaticHittingExact);

static void BM_Theorem2(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(theorem2_bruteforce(4, 1, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_Theorem2)->Arg(3)->Arg(5);

BENCHMARK_MAIN();
