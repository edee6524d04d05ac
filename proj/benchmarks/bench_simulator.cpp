#include <benchmark/benchmark.h>

#include "lifopr/simulator.hpp"

namespace {

lifopr::SystemModel four_class_model(int servers) {
    lifopr::SystemModel m;
    m.servers = servers;
    for (double rate : {5.0, 2.5, 5.0 / 3.0, 1.25})
        m.classes.push_back({servers / 3.0, lifopr::ServiceDistribution::exponential(rate)});
    return m;
}

} // namespace

// Counted jobs per second of simulated workload at load 2/3.
static void BM_SimulateFourClass(benchmark::State& state) {
    const auto model = four_class_model(static_cast<int>(state.range(0)));
    lifopr::RunConfig cfg;
    cfg.target_completions = 50000;
    cfg.warmup_time = 10.0;
    std::uint64_t seed = 1;
    for (auto _ : state) {
        cfg.seed = seed++;
        benchmark::DoNotOptimize(lifopr::run(model, {}, cfg));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(cfg.target_completions));
}
BENCHMARK(BM_SimulateFourClass)->Arg(3)->Arg(24)->Unit(benchmark::kMillisecond);
