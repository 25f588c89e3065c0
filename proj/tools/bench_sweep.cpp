// Serial reference sweep vs OpenMP sweep over the same batch of runs.

#include <e2c/experiment/sweep.hpp>

#include <benchmark/benchmark.h>

#include <omp.h>

using namespace e2c;

namespace {

std::vector<experiment::RunCase> make_cases(std::size_t runs) {
    const EetMatrix eet({"T1", "T2", "T3"}, {"M0", "M1", "M2", "M3"},
                        {{Ticks::from_seconds(2), Ticks::from_seconds(4), Ticks::from_seconds(3), std::nullopt},
                         {Ticks::from_seconds(3), Ticks::from_seconds(1), Ticks::from_seconds(5), Ticks::from_seconds(2)},
                         {Ticks::from_seconds(4), Ticks::from_seconds(3), Ticks::from_seconds(1), Ticks::from_seconds(2)}});
    std::vector<MachineSpec> machines;
    for (std::size_t m = 0; m < 4; ++m) machines.push_back({m, "M" + std::to_string(m), 10.0, 50.0});

    const auto& registry = sched::default_registry();
    const std::vector<std::string> policies{"fcfs", "mect", "meet", "mm", "mmu", "msd"};
    std::vector<experiment::RunCase> cases;
    for (std::size_t i = 0; i < runs; ++i) {
        io::WorkloadGenSpec spec;
        spec.horizon = Ticks::from_seconds(400);
        spec.seed = i;
        for (const char* t : {"T1", "T2", "T3"}) spec.types.push_back({t, io::ExponentialArrivals{0.5}});
        auto scenario = std::make_shared<Scenario>(Scenario{eet, machines, io::generate_workload(spec, eet)});
        cases.push_back({scenario, experiment::config_for(registry, policies[i % policies.size()], 2)});
    }
    return cases;
}

void BM_SweepSerial(benchmark::State& state) {
    const auto cases = make_cases(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(experiment::run_serial(cases, sched::default_registry()));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_SweepParallel(benchmark::State& state) {
    const auto cases = make_cases(static_cast<std::size_t>(state.range(0)));
    state.counters["threads"] = omp_get_max_threads();
    for (auto _ : state) benchmark::DoNotOptimize(experiment::run_parallel(cases, sched::default_registry()));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

} // namespace

BENCHMARK(BM_SweepSerial)->Arg(12)->Arg(48)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SweepParallel)->Arg(12)->Arg(48)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
