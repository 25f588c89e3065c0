#pragma once

#include <e2c/sched/policy.hpp>

namespace e2c::sched {

/// Per-machine ready_time + EET; nullopt where the machine cannot run the type.
std::vector<std::optional<TimePoint>> expected_completion_time(const MachinesView& view, TaskTypeId type);

// Immediate policies: only ever consider the head of the batch.
std::optional<Assignment> fcfs_select(std::span<const BatchedTask> batch, const MachinesView& view);
std::optional<Assignment> mect_select(std::span<const BatchedTask> batch, const MachinesView& view);
std::optional<Assignment> meet_select(std::span<const BatchedTask> batch, const MachinesView& view);

// Batch policies: may pick any batched task.
std::optional<Assignment> min_min_select(std::span<const BatchedTask> batch, const MachinesView& view);
std::optional<Assignment> msd_select(std::span<const BatchedTask> batch, const MachinesView& view);
std::optional<Assignment> mmu_select(std::span<const BatchedTask> batch, const MachinesView& view);

} // namespace e2c::sched
