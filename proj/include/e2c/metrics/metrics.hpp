#pragma once

#include <e2c/engine/simulation.hpp>

#include <vector>

namespace e2c::metrics {

/// busy_power * busy seconds + idle_power * idle seconds.
[[nodiscard]] double machine_energy(Duration busy, Duration idle, const MachineSpec& spec);

struct MachineStats {
    MachineIndex machine = 0;
    std::size_t completed = 0;
    std::size_t missed = 0;
    Duration busy_ticks;
    Duration idle_ticks;
    double utilization = 0.0;
    double energy_j = 0.0;
};

struct SummaryStats {
    std::size_t total = 0;
    std::size_t completed = 0;
    std::size_t canceled = 0;
    std::size_t missed = 0;
    double completion_pct = 100.0;
    double total_energy_j = 0.0;
    TimePoint makespan;
    /// assign - arrival over assigned tasks, rounded to the nearest tick.
    Duration mean_wait;
    /// finish - arrival over completed tasks, rounded to the nearest tick.
    Duration mean_response;
};

struct Summary {
    SummaryStats stats;
    std::vector<MachineStats> machines;
};

Summary summarize(const engine::SimOutcome& outcome);

} // namespace e2c::metrics
