#include <e2c/engine/simulation.hpp>

#include <e2c/sched/registry.hpp>

#include <algorithm>
#include <cassert>
#include <stdexcept>

namespace e2c::engine {

Simulation::Simulation(std::shared_ptr<const Scenario> scenario, SimConfig config,
                       std::shared_ptr<const sched::Policy> policy)
    : scenario_(std::move(scenario)), config_(std::move(config)), policy_(std::move(policy)) {
    if (!scenario_) throw UsageError("simulation needs a scenario");
    if (!policy_) throw UsageError("simulation needs a policy");
    if (auto report = validate_scenario(*scenario_); !report.ok()) throw ScenarioError(std::move(report));
    sched::check_config(config_, *policy_);
    config_.policy = policy_->name;

    tasks_ = scenario_->workload;
    std::stable_sort(tasks_.begin(), tasks_.end(), [](const Task& a, const Task& b) {
        return std::tie(a.arrival, a.id) < std::tie(b.arrival, b.id);
    });
    for (std::size_t i = 0; i < tasks_.size(); ++i) {
        auto& t = tasks_[i];
        t.status = TaskStatus::Pending;
        t.assigned_machine.reset();
        t.assign_time.reset();
        t.start.reset();
        t.finish.reset();
        t.predicted_completion.reset();
        t.energy_j = 0.0;
        slot_of_.emplace(t.id, i);
        push_event({t.arrival, EventKind::Arrival, t.id});
        push_event({t.deadline, EventKind::DeadlineCheck, t.id});
    }
    for (const auto& spec : scenario_->machines) machines_.push_back(MachineState{spec, {}, {}, {}, {}, {}});
    counters_.total = tasks_.size();
}

const Task& Simulation::task(TaskId id) const {
    auto it = slot_of_.find(id);
    if (it == slot_of_.end()) throw UsageError("unknown task id " + std::to_string(id));
    return tasks_[it->second];
}

Task& Simulation::mutable_task(TaskId id) { return tasks_[slot_of_.at(id)]; }

std::optional<SimEvent> Simulation::next_event() const {
    if (events_.empty()) return std::nullopt;
    return *events_.begin();
}

void Simulation::push_event(SimEvent e) { events_.insert(e); }

TimePoint Simulation::ready_time(MachineIndex m) const {
    const auto& ms = machines_.at(m);
    TimePoint ready = clock_;
    if (ms.executing) ready = ms.executing->will_finish;
    return ready + ms.waiting_work;
}

sched::MachinesView Simulation::machines_view() const {
    std::vector<sched::MachineView> views;
    views.reserve(machines_.size());
    for (MachineIndex m = 0; m < machines_.size(); ++m) {
        const auto& ms = machines_[m];
        sched::MachineView v;
        v.index = m;
        if (config_.machine_queue_capacity) {
            const auto cap = *config_.machine_queue_capacity;
            v.free_slots = ms.waiting.size() >= cap ? 0 : cap - ms.waiting.size();
        }
        v.task_count = ms.waiting.size() + (ms.executing ? 1 : 0);
        v.ready_time = ready_time(m);
        views.push_back(v);
    }
    return sched::MachinesView(scenario_->eet, clock_, std::move(views));
}

// Busy/idle accounting advances only on events that change state, so a
// trailing no-op deadline check does not stretch the makespan.
void Simulation::settle() {
    if (accounted_until_ == clock_) return;
    const Duration delta = clock_ - accounted_until_;
    for (auto& ms : machines_) {
        if (ms.executing) {
            ms.busy_ticks += delta;
        } else {
            ms.idle_ticks += delta;
        }
    }
    accounted_until_ = clock_;
}

void Simulation::change(StepResult& result, Task& task, TaskStatus to) {
    if (!is_legal_transition(task.status, to)) {
        throw std::logic_error("illegal task transition " + std::string(to_string(task.status)) + " -> " +
                               std::string(to_string(to)) + " for task " + std::to_string(task.id));
    }
    settle();
    result.changes.push_back({task.id, task.status, to, task.assigned_machine});
    task.status = to;
    switch (to) {
    case TaskStatus::Completed: ++counters_.completed; break;
    case TaskStatus::Canceled: ++counters_.canceled; break;
    case TaskStatus::Missed: ++counters_.missed; break;
    default: break;
    }
}

void Simulation::wake_if_needed() {
    if (!batch_.empty()) push_event({clock_, EventKind::SchedulerWake, 0});
}

void Simulation::remove_from_batch(TaskId id) {
    auto it = std::find_if(batch_.begin(), batch_.end(), [id](const auto& b) { return b.id == id; });
    assert(it != batch_.end());
    batch_.erase(it);
}

void Simulation::start_next(MachineIndex m, StepResult& result) {
    auto& ms = machines_[m];
    if (ms.executing || ms.waiting.empty()) return;
    const TaskId id = ms.waiting.front();
    ms.waiting.pop_front();
    auto& task = mutable_task(id);
    const Duration eet = *scenario_->eet.at(task.type, m);
    ms.waiting_work -= eet;
    change(result, task, TaskStatus::Executing);
    task.start = clock_;
    ms.executing = Execution{id, clock_, clock_ + eet};
    push_event({clock_ + eet, EventKind::Completion, static_cast<std::int64_t>(m)});
}

void Simulation::stop_execution(MachineIndex m, Task& task, TaskStatus to, StepResult& result) {
    auto& ms = machines_[m];
    change(result, task, to);
    task.finish = clock_;
    task.energy_j = ms.spec.busy_power_w * (clock_ - *task.start).seconds();
    ms.executing.reset();
    start_next(m, result);
}

void Simulation::on_completion(MachineIndex m, StepResult& result) {
    auto& ms = machines_.at(m);
    if (!ms.executing || ms.executing->will_finish != clock_) {
        throw std::logic_error("stale completion event for machine " + std::to_string(m));
    }
    stop_execution(m, mutable_task(ms.executing->task), TaskStatus::Completed, result);
    wake_if_needed();
}

void Simulation::on_deadline(TaskId id, StepResult& result) {
    auto& task = mutable_task(id);
    switch (task.status) {
    case TaskStatus::Batched:
        remove_from_batch(id);
        change(result, task, TaskStatus::Canceled);
        task.finish = clock_;
        break;
    case TaskStatus::Queued: {
        auto& ms = machines_[*task.assigned_machine];
        ms.waiting.erase(std::find(ms.waiting.begin(), ms.waiting.end(), id));
        ms.waiting_work -= *scenario_->eet.at(task.type, *task.assigned_machine);
        change(result, task, TaskStatus::Missed);
        task.finish = clock_;
        wake_if_needed();
        break;
    }
    case TaskStatus::Executing: {
        const MachineIndex m = *task.assigned_machine;
        events_.erase(SimEvent{machines_[m].executing->will_finish, EventKind::Completion,
                               static_cast<std::int64_t>(m)});
        stop_execution(m, task, TaskStatus::Missed, result);
        wake_if_needed();
        break;
    }
    default:
        // Pending (deadline == arrival, handled on arrival) or already terminal.
        break;
    }
}

void Simulation::on_arrival(TaskId id, StepResult& result) {
    auto& task = mutable_task(id);
    change(result, task, TaskStatus::Batched);
    if (task.deadline <= clock_) {
        // Its deadline check already ran at this tick while the task was pending.
        change(result, task, TaskStatus::Canceled);
        task.finish = clock_;
        return;
    }
    batch_.push_back({task.id, task.type, task.arrival, task.deadline});
    wake_if_needed();
}

void Simulation::on_wake(StepResult& result) {
    while (!batch_.empty()) {
        const auto view = machines_view();
        const auto chosen = policy_->select(batch_, view);
        if (!chosen) break;

        auto it = std::find_if(batch_.begin(), batch_.end(), [&](const auto& b) { return b.id == chosen->task; });
        if (it == batch_.end()) {
            throw std::logic_error("policy " + policy_->name + " chose task " + std::to_string(chosen->task) +
                                   " which is not batched");
        }
        const MachineIndex m = chosen->machine;
        if (m >= machines_.size() || !view.can_accept(it->type, m)) {
            throw std::logic_error("policy " + policy_->name + " chose machine " + std::to_string(m) +
                                   " which cannot accept task " + std::to_string(chosen->task));
        }
        batch_.erase(it);

        auto& task = mutable_task(chosen->task);
        const Duration eet = *scenario_->eet.at(task.type, m);
        task.assigned_machine = m;
        change(result, task, TaskStatus::Queued);
        task.assign_time = clock_;
        task.predicted_completion = view[m].ready_time + eet;
        machines_[m].waiting.push_back(task.id);
        machines_[m].waiting_work += eet;
        start_next(m, result);
    }
}

StepResult Simulation::step() {
    if (finished()) throw UsageError("step on a finished simulation");
    const SimEvent event = *events_.begin();
    events_.erase(events_.begin());
    clock_ = event.time;

    StepResult result;
    result.seq = log_.size();
    result.event = event;
    switch (event.kind) {
    case EventKind::Completion: on_completion(static_cast<MachineIndex>(event.entity), result); break;
    case EventKind::DeadlineCheck: on_deadline(event.entity, result); break;
    case EventKind::Arrival: on_arrival(event.entity, result); break;
    case EventKind::SchedulerWake: on_wake(result); break;
    }
    log_.push_back(result);
    return result;
}

SimOutcome Simulation::outcome() const {
    SimOutcome out;
    out.config = config_;
    out.tasks = tasks_;
    std::sort(out.tasks.begin(), out.tasks.end(), [](const Task& a, const Task& b) { return a.id < b.id; });
    for (const auto& ms : machines_) {
        out.machines.push_back(ms.spec);
        out.busy_ticks.push_back(ms.busy_ticks);
        out.idle_ticks.push_back(ms.idle_ticks);
    }
    out.makespan = accounted_until_;
    out.event_log = log_;
    for (const auto& t : scenario_->eet.task_types()) out.task_type_names.push_back(t.name);
    return out;
}

Simulation init_simulation(std::shared_ptr<const Scenario> scenario, const SimConfig& config,
                           std::shared_ptr<const sched::Policy> policy) {
    return Simulation(std::move(scenario), config, std::move(policy));
}

SimOutcome run_to_completion(Simulation& sim) {
    while (!sim.finished()) sim.step();
    return sim.outcome();
}

} // namespace e2c::engine
