#include "fixtures.hpp"

#include <e2c/experiment/sweep.hpp>
#include <e2c/io/csv.hpp>
#include <e2c/report/report.hpp>

#include <gtest/gtest.h>

#include <random>

namespace e2c::experiment {
namespace {

TEST(Sweep, ParallelMatchesSerial) {
    const auto& registry = sched::default_registry();
    std::mt19937_64 rng(9);
    std::vector<RunCase> cases;
    for (int i = 0; i < 12; ++i) {
        auto s = testing::share(testing::random_scenario(rng, {.max_tasks = 150}));
        for (const char* p : {"fcfs", "mect", "mm", "mmu"}) cases.push_back({s, config_for(registry, p, 2)});
    }
    const auto serial = run_serial(cases, registry);
    const auto parallel = run_parallel(cases, registry);
    ASSERT_EQ(serial.size(), parallel.size());
    for (std::size_t i = 0; i < serial.size(); ++i) {
        EXPECT_EQ(serial[i].event_log, parallel[i].event_log);
        EXPECT_EQ(report::render_report(serial[i], report::ReportKind::Full),
                  report::render_report(parallel[i], report::ReportKind::Full));
    }
}

TEST(Sweep, ConfigFollowsPolicyMode) {
    const auto& registry = sched::default_registry();
    const auto imm = config_for(registry, "MECT", 3);
    EXPECT_EQ(imm.mode, SchedulingMode::Immediate);
    EXPECT_FALSE(imm.machine_queue_capacity);
    const auto batch = config_for(registry, "mm", 3);
    EXPECT_EQ(batch.mode, SchedulingMode::Batch);
    EXPECT_EQ(batch.machine_queue_capacity, 3u);
}

TEST(Sweep, IntensityStudySerialEqualsParallel) {
    IntensityStudy study;
    study.eet = io::parse_eet_csv(io::read_file(E2C_SCENARIO_DIR "/eet_heterogeneous.csv"));
    study.machines = io::parse_machines_csv(io::read_file(E2C_SCENARIO_DIR "/machines.csv"));
    for (const char* t : {"T1", "T2", "T3", "T4"}) study.base.types.push_back({t, io::ExponentialArrivals{0.15}});
    study.base.horizon = testing::sec(100);
    study.rate_factors = {1, 2};
    study.seeds = {1, 2};
    study.policies = {"mect", "mm"};
    study.batch_capacity = 3;
    const auto& registry = sched::default_registry();
    const auto a = run_intensity_study(study, registry, false);
    const auto b = run_intensity_study(study, registry, true);
    ASSERT_EQ(a.size(), 4u);
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a[i].policy, b[i].policy);
        EXPECT_EQ(a[i].rate_factor, b[i].rate_factor);
        EXPECT_EQ(a[i].mean_completion_pct, b[i].mean_completion_pct);
        EXPECT_EQ(a[i].mean_energy_j, b[i].mean_energy_j);
    }
    EXPECT_EQ(a[0].policy, "mect");
    EXPECT_EQ(a[1].rate_factor, 2.0);
}

} // namespace
} // namespace e2c::experiment
