#pragma once

#include <e2c/core/model.hpp>

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace e2c::sched {

/// What a policy may see of a batched task.
struct BatchedTask {
    TaskId id = 0;
    TaskTypeId type = 0;
    TimePoint arrival;
    TimePoint deadline;
};

struct MachineView {
    MachineIndex index = 0;
    /// Remaining waiting-queue slots; nullopt when unbounded.
    std::optional<std::size_t> free_slots;
    /// Waiting plus executing.
    std::size_t task_count = 0;
    /// clock + remaining execution + sum of waiting EETs.
    TimePoint ready_time;
};

/// Read-only projection of the machines at one scheduling instant.
class MachinesView {
public:
    MachinesView(const EetMatrix& eet, TimePoint clock, std::vector<MachineView> machines)
        : eet_(&eet), clock_(clock), machines_(std::move(machines)) {}

    [[nodiscard]] TimePoint clock() const { return clock_; }
    [[nodiscard]] const EetMatrix& eet() const { return *eet_; }
    [[nodiscard]] std::size_t size() const { return machines_.size(); }
    [[nodiscard]] const MachineView& operator[](MachineIndex m) const { return machines_[m]; }
    [[nodiscard]] const std::vector<MachineView>& machines() const { return machines_; }

    [[nodiscard]] bool has_free_slot(MachineIndex m) const {
        const auto& slots = machines_[m].free_slots;
        return !slots || *slots > 0;
    }
    [[nodiscard]] bool supports(TaskTypeId type, MachineIndex m) const { return eet_->supports(type, m); }
    /// Supported and has a free slot.
    [[nodiscard]] bool can_accept(TaskTypeId type, MachineIndex m) const {
        return supports(type, m) && has_free_slot(m);
    }

private:
    const EetMatrix* eet_;
    TimePoint clock_;
    std::vector<MachineView> machines_;
};

struct Assignment {
    TaskId task = 0;
    MachineIndex machine = 0;
    TimePoint predicted_completion;

    friend bool operator==(const Assignment&, const Assignment&) = default;
};

/// A policy maps (batch in FIFO order, machines) to at most one assignment.
/// The engine applies it and calls again until the policy returns nullopt.
/// Implementations must be pure functions of their arguments.
using SelectFn = std::function<std::optional<Assignment>(std::span<const BatchedTask>, const MachinesView&)>;

struct Policy {
    std::string name;
    SchedulingMode mode = SchedulingMode::Immediate;
    SelectFn select;
};

} // namespace e2c::sched
