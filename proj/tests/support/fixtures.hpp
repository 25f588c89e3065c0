#pragma once

#include <e2c/engine/simulation.hpp>
#include <e2c/sched/registry.hpp>

#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace e2c::testing {

inline Ticks sec(double s) { return Ticks{static_cast<std::int64_t>(s * 1'000'000 + (s >= 0 ? 0.5 : -0.5))}; }

/// EET {T1:[2s,4s], T2:[3s,1s]} on machines M0, M1 (10 W idle, 50 W busy).
Scenario two_by_two(std::vector<Task> workload = {});

Task make_task(TaskId id, TaskTypeId type, double arrival_s, double deadline_s);

std::shared_ptr<const Scenario> share(Scenario s);

/// Builds and runs a simulation with a registry policy name.
engine::SimOutcome run_policy(const Scenario& s, const std::string& policy,
                              std::optional<std::size_t> capacity = std::nullopt);

struct RandomScenarioLimits {
    std::size_t min_machines = 2, max_machines = 8;
    std::size_t min_types = 1, max_types = 5;
    std::size_t min_tasks = 10, max_tasks = 500;
};

/// Random but valid scenario: ms-granular EET entries, some `inf`, mixed
/// load levels, occasional zero-slack deadlines.
Scenario random_scenario(std::mt19937_64& rng, const RandomScenarioLimits& limits = {});

/// Random batch-mode capacity (1..4 or unbounded).
std::optional<std::size_t> random_capacity(std::mt19937_64& rng);

/// A batch plus machine views for calling policies directly.
struct PolicyInstance {
    EetMatrix eet;
    std::vector<sched::BatchedTask> batch;
    std::vector<sched::MachineView> machines;
    TimePoint clock;
};

/// 1-5 machines, types and tasks; ~20% unsupported cells. With `all_idle`
/// every machine is empty and unbounded; otherwise loads and free slots vary.
PolicyInstance random_instance(std::mt19937_64& rng, bool all_idle = false);

} // namespace e2c::testing
