#include <benchmark/benchmark.h>

#include "lifopr/analytic.hpp"

static void BM_ErlangC(benchmark::State& state) {
    const int servers = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(lifopr::erlang_c(servers, 0.9));
}
BENCHMARK(BM_ErlangC)->Arg(1)->Arg(8)->Arg(64)->Arg(1024);

static void BM_ApproxMetrics(benchmark::State& state) {
    lifopr::SystemModel model;
    model.servers = 16;
    for (int k = 0; k < state.range(0); ++k)
        model.classes.push_back({1.0, lifopr::ServiceDistribution::erlang(2, 0.25 * state.range(0))});
    for (auto _ : state) benchmark::DoNotOptimize(lifopr::approx_metrics(model));
}
BENCHMARK(BM_ApproxMetrics)->Arg(4)->Arg(32);
