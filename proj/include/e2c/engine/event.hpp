#pragma once

#include <e2c/core/model.hpp>

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace e2c::engine {

/// Declaration order is the same-tick rank.
enum class EventKind : int { Completion = 0, DeadlineCheck = 1, Arrival = 2, SchedulerWake = 3 };

[[nodiscard]] std::string_view to_string(EventKind k);

/// `entity` is the machine index for Completion, the task id for
/// DeadlineCheck and Arrival, and 0 for SchedulerWake.
struct SimEvent {
    TimePoint time;
    EventKind kind = EventKind::SchedulerWake;
    std::int64_t entity = 0;

    friend bool operator==(const SimEvent&, const SimEvent&) = default;
};

struct OrderKey {
    TimePoint time;
    int rank = 0;
    std::int64_t entity = 0;

    auto operator<=>(const OrderKey&) const = default;
};

[[nodiscard]] constexpr OrderKey event_order_key(const SimEvent& e) {
    return OrderKey{e.time, static_cast<int>(e.kind), e.entity};
}

struct EventOrder {
    bool operator()(const SimEvent& a, const SimEvent& b) const {
        return event_order_key(a) < event_order_key(b);
    }
};

struct StatusChange {
    TaskId task = 0;
    TaskStatus from = TaskStatus::Pending;
    TaskStatus to = TaskStatus::Pending;
    std::optional<MachineIndex> machine;

    friend bool operator==(const StatusChange&, const StatusChange&) = default;
};

/// One applied event and the lifecycle transitions it caused.
struct StepResult {
    std::uint64_t seq = 0;
    SimEvent event;
    std::vector<StatusChange> changes;

    friend bool operator==(const StepResult&, const StepResult&) = default;
};

/// One line per applied event; stable text used for reproducibility checks.
std::string format_event_log(const std::vector<StepResult>& log);

} // namespace e2c::engine
