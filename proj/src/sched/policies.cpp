#include <e2c/sched/policies.hpp>

#include <tuple>

namespace e2c::sched {

namespace {

struct Best {
    MachineIndex machine;
    TimePoint completion;
};

// Minimum expected completion over machines able to accept the type now.
// Strict `<` keeps the lowest index on ties.
std::optional<Best> best_completion(const MachinesView& view, TaskTypeId type) {
    std::optional<Best> best;
    for (MachineIndex m = 0; m < view.size(); ++m) {
        if (!view.can_accept(type, m)) continue;
        const TimePoint ect = view[m].ready_time + *view.eet().at(type, m);
        if (!best || ect < best->completion) best = Best{m, ect};
    }
    return best;
}

Assignment make_assignment(const BatchedTask& task, MachineIndex m, const MachinesView& view) {
    return {task.id, m, view[m].ready_time + *view.eet().at(task.type, m)};
}

} // namespace

std::vector<std::optional<TimePoint>> expected_completion_time(const MachinesView& view, TaskTypeId type) {
    std::vector<std::optional<TimePoint>> out(view.size());
    for (MachineIndex m = 0; m < view.size(); ++m) {
        if (const auto& e = view.eet().at(type, m)) out[m] = view[m].ready_time + *e;
    }
    return out;
}

std::optional<Assignment> fcfs_select(std::span<const BatchedTask> batch, const MachinesView& view) {
    if (batch.empty()) return std::nullopt;
    const auto& head = batch.front();
    std::optional<MachineIndex> best;
    for (MachineIndex m = 0; m < view.size(); ++m) {
        if (!view.can_accept(head.type, m)) continue;
        if (!best || view[m].task_count < view[*best].task_count) best = m;
    }
    if (!best) return std::nullopt;
    return make_assignment(head, *best, view);
}

std::optional<Assignment> mect_select(std::span<const BatchedTask> batch, const MachinesView& view) {
    if (batch.empty()) return std::nullopt;
    const auto& head = batch.front();
    const auto best = best_completion(view, head.type);
    if (!best) return std::nullopt;
    return Assignment{head.id, best->machine, best->completion};
}

std::optional<Assignment> meet_select(std::span<const BatchedTask> batch, const MachinesView& view) {
    if (batch.empty()) return std::nullopt;
    const auto& head = batch.front();
    std::optional<MachineIndex> best;
    for (MachineIndex m = 0; m < view.size(); ++m) {
        if (!view.can_accept(head.type, m)) continue;
        if (!best || *view.eet().at(head.type, m) < *view.eet().at(head.type, *best)) best = m;
    }
    if (!best) return std::nullopt;
    return make_assignment(head, *best, view);
}

std::optional<Assignment> min_min_select(std::span<const BatchedTask> batch, const MachinesView& view) {
    std::optional<Assignment> chosen;
    std::tuple<TimePoint, MachineIndex, TaskId, TimePoint> chosen_key{};
    for (const auto& task : batch) {
        const auto best = best_completion(view, task.type);
        if (!best) continue;
        const auto key = std::tuple{best->completion, best->machine, task.id, task.arrival};
        if (!chosen || key < chosen_key) {
            chosen = Assignment{task.id, best->machine, best->completion};
            chosen_key = key;
        }
    }
    return chosen;
}

std::optional<Assignment> msd_select(std::span<const BatchedTask> batch, const MachinesView& view) {
    std::optional<Assignment> chosen;
    std::tuple<TimePoint, TimePoint, TaskId> chosen_key{};
    for (const auto& task : batch) {
        const auto best = best_completion(view, task.type);
        if (!best) continue;
        const auto key = std::tuple{task.deadline, task.arrival, task.id};
        if (!chosen || key < chosen_key) {
            chosen = Assignment{task.id, best->machine, best->completion};
            chosen_key = key;
        }
    }
    return chosen;
}

std::optional<Assignment> mmu_select(std::span<const BatchedTask> batch, const MachinesView& view) {
    std::optional<Assignment> chosen;
    std::tuple<Duration, TimePoint, TaskId> chosen_key{};
    for (const auto& task : batch) {
        const auto best = best_completion(view, task.type);
        if (!best) continue;
        const Duration slack = task.deadline - best->completion;
        const auto key = std::tuple{slack, task.deadline, task.id};
        if (!chosen || key < chosen_key) {
            chosen = Assignment{task.id, best->machine, best->completion};
            chosen_key = key;
        }
    }
    return chosen;
}

} // namespace e2c::sched
