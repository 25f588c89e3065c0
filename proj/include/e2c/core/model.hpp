#pragma once

#include <e2c/core/time.hpp>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace e2c {

using TaskTypeId = std::size_t;
using MachineIndex = std::size_t;
using TaskId = std::int64_t;

struct TaskType {
    TaskTypeId id = 0;
    std::string name;

    friend bool operator==(const TaskType&, const TaskType&) = default;
};

/// One EET cell. std::nullopt is the Unsupported sentinel (CSV token `inf`).
using EetEntry = std::optional<Duration>;

/// Task-type x machine table of expected execution durations.
///
/// Construction enforces the table invariants: rectangular, every finite
/// entry positive, every row with at least one finite entry, unique names.
class EetMatrix {
public:
    EetMatrix() = default;
    EetMatrix(std::vector<std::string> task_type_names,
              std::vector<std::string> machine_names,
              std::vector<std::vector<EetEntry>> rows);

    [[nodiscard]] std::size_t type_count() const { return types_.size(); }
    [[nodiscard]] std::size_t machine_count() const { return machine_names_.size(); }
    [[nodiscard]] const std::vector<TaskType>& task_types() const { return types_; }
    [[nodiscard]] const std::vector<std::string>& machine_names() const { return machine_names_; }

    /// Throws UsageError when either index is out of range.
    [[nodiscard]] EetEntry lookup(TaskTypeId type, MachineIndex machine) const;

    /// Unchecked access for hot paths that already validated their indices.
    [[nodiscard]] const EetEntry& at(TaskTypeId type, MachineIndex machine) const {
        return cells_[type * machine_names_.size() + machine];
    }
    [[nodiscard]] bool supports(TaskTypeId type, MachineIndex machine) const {
        return at(type, machine).has_value();
    }

    [[nodiscard]] std::optional<TaskTypeId> find_type(std::string_view name) const;

    /// Mean of the finite entries of a row, in ticks.
    [[nodiscard]] double mean_finite(TaskTypeId type) const;

    /// Every finite entry multiplied by k (k > 0).
    [[nodiscard]] EetMatrix scaled(std::int64_t k) const;

    friend bool operator==(const EetMatrix&, const EetMatrix&) = default;

private:
    std::vector<TaskType> types_;
    std::vector<std::string> machine_names_;
    std::vector<EetEntry> cells_;
};

enum class TaskStatus { Pending, Batched, Queued, Executing, Completed, Canceled, Missed };

[[nodiscard]] std::string_view to_string(TaskStatus s);
[[nodiscard]] bool is_terminal(TaskStatus s);
/// Whether `from -> to` is an edge of the task lifecycle graph.
[[nodiscard]] bool is_legal_transition(TaskStatus from, TaskStatus to);

struct Task {
    TaskId id = 0;
    TaskTypeId type = 0;
    TimePoint arrival;
    TimePoint deadline;
    TaskStatus status = TaskStatus::Pending;
    std::optional<MachineIndex> assigned_machine;
    std::optional<TimePoint> assign_time;
    std::optional<TimePoint> start;
    std::optional<TimePoint> finish;
    std::optional<TimePoint> predicted_completion;
    double energy_j = 0.0;

    friend bool operator==(const Task&, const Task&) = default;
};

struct MachineSpec {
    MachineIndex index = 0;
    std::string name;
    double idle_power_w = 0.0;
    double busy_power_w = 0.0;

    friend bool operator==(const MachineSpec&, const MachineSpec&) = default;
};

enum class SchedulingMode { Immediate, Batch };

[[nodiscard]] std::string_view to_string(SchedulingMode m);

struct SimConfig {
    std::string policy = "mect";
    SchedulingMode mode = SchedulingMode::Immediate;
    /// Waiting-queue capacity per machine; nullopt means unbounded.
    std::optional<std::size_t> machine_queue_capacity;
    std::uint64_t seed = 0;
};

/// Loaded inputs of one run.
struct Scenario {
    EetMatrix eet;
    std::vector<MachineSpec> machines;
    std::vector<Task> workload;
};

struct Violation {
    std::string entity;
    std::string message;
};

struct ValidationReport {
    std::vector<Violation> violations;

    [[nodiscard]] bool ok() const { return violations.empty(); }
    /// One violation per line.
    [[nodiscard]] std::string to_string() const;
};

/// Cross-file compatibility check. Violations are data, never thrown.
ValidationReport validate_scenario(const EetMatrix& eet,
                                   const std::vector<MachineSpec>& machines,
                                   const std::vector<Task>& workload);

inline ValidationReport validate_scenario(const Scenario& s) {
    return validate_scenario(s.eet, s.machines, s.workload);
}

/// Scenario with every EET entry, arrival and deadline multiplied by k.
Scenario rescale_scenario(const Scenario& s, std::int64_t k);

} // namespace e2c
