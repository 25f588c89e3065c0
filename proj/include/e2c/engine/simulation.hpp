#pragma once

#include <e2c/core/errors.hpp>
#include <e2c/core/model.hpp>
#include <e2c/engine/event.hpp>
#include <e2c/sched/policy.hpp>

#include <deque>
#include <memory>
#include <optional>
#include <set>
#include <unordered_map>
#include <vector>

namespace e2c::engine {

/// Scenario rejected by validate_scenario; carries the full report.
class ScenarioError : public ConfigError {
public:
    explicit ScenarioError(ValidationReport report)
        : ConfigError("invalid scenario:\n" + report.to_string()), report_(std::move(report)) {}
    [[nodiscard]] const ValidationReport& report() const { return report_; }

private:
    ValidationReport report_;
};

struct Execution {
    TaskId task = 0;
    TimePoint started;
    TimePoint will_finish;
};

struct MachineState {
    MachineSpec spec;
    std::deque<TaskId> waiting;
    std::optional<Execution> executing;
    /// Sum of EET over `waiting`.
    Duration waiting_work;
    /// Accounted up to Simulation::makespan(): busy + idle equals it.
    Duration busy_ticks;
    Duration idle_ticks;
};

struct Counters {
    std::size_t total = 0;
    std::size_t completed = 0;
    std::size_t canceled = 0;
    std::size_t missed = 0;
};

/// Finished-run record.
struct SimOutcome {
    SimConfig config;
    std::vector<Task> tasks; // by ascending id
    std::vector<MachineSpec> machines;
    std::vector<Duration> busy_ticks;
    std::vector<Duration> idle_ticks;
    TimePoint makespan;
    std::vector<StepResult> event_log;
    std::vector<std::string> task_type_names;
};

/// Discrete-event state of one run.
///
/// Same-tick events apply in the order Completion, DeadlineCheck, Arrival,
/// SchedulerWake, then by entity id. Machines run one task at a time; a task
/// still batched at its deadline is canceled, a task queued or executing at
/// its deadline is dropped (missed). Finishing exactly at the deadline counts
/// as completed.
class Simulation {
public:
    /// Throws ScenarioError if validation fails and ConfigError if the
    /// policy does not fit the configuration.
    Simulation(std::shared_ptr<const Scenario> scenario, SimConfig config,
               std::shared_ptr<const sched::Policy> policy);

    [[nodiscard]] bool finished() const { return events_.empty(); }

    /// Applies the minimum-key event. Throws UsageError once finished().
    StepResult step();

    [[nodiscard]] TimePoint clock() const { return clock_; }
    /// Time of the last event that changed any task's status.
    [[nodiscard]] TimePoint makespan() const { return accounted_until_; }
    [[nodiscard]] const SimConfig& config() const { return config_; }
    [[nodiscard]] const Scenario& scenario() const { return *scenario_; }
    [[nodiscard]] const sched::Policy& policy() const { return *policy_; }

    /// In workload order (arrival, id).
    [[nodiscard]] const std::vector<Task>& tasks() const { return tasks_; }
    [[nodiscard]] const Task& task(TaskId id) const;
    [[nodiscard]] const std::vector<sched::BatchedTask>& batch_queue() const { return batch_; }
    [[nodiscard]] const std::vector<MachineState>& machines() const { return machines_; }
    [[nodiscard]] const Counters& counters() const { return counters_; }
    [[nodiscard]] const std::vector<StepResult>& event_log() const { return log_; }
    [[nodiscard]] std::size_t pending_event_count() const { return events_.size(); }
    [[nodiscard]] std::optional<SimEvent> next_event() const;

    [[nodiscard]] TimePoint ready_time(MachineIndex m) const;
    [[nodiscard]] sched::MachinesView machines_view() const;

    /// Snapshot of the finished run. Callable at any time; before the end it
    /// reflects the state so far.
    [[nodiscard]] SimOutcome outcome() const;

private:
    Task& mutable_task(TaskId id);
    void push_event(SimEvent e);
    void change(StepResult& result, Task& task, TaskStatus to);
    void settle();
    void wake_if_needed();
    void start_next(MachineIndex m, StepResult& result);
    void stop_execution(MachineIndex m, Task& task, TaskStatus to, StepResult& result);
    void remove_from_batch(TaskId id);

    void on_completion(MachineIndex m, StepResult& result);
    void on_deadline(TaskId id, StepResult& result);
    void on_arrival(TaskId id, StepResult& result);
    void on_wake(StepResult& result);

    std::shared_ptr<const Scenario> scenario_;
    SimConfig config_;
    std::shared_ptr<const sched::Policy> policy_;

    TimePoint clock_;
    TimePoint accounted_until_;
    std::set<SimEvent, EventOrder> events_;
    std::vector<Task> tasks_;
    std::unordered_map<TaskId, std::size_t> slot_of_;
    std::vector<sched::BatchedTask> batch_;
    std::vector<MachineState> machines_;
    Counters counters_;
    std::vector<StepResult> log_;
};

/// Validates the scenario and builds the initial event queue.
Simulation init_simulation(std::shared_ptr<const Scenario> scenario, const SimConfig& config,
                           std::shared_ptr<const sched::Policy> policy);

/// Steps until finished and returns the outcome.
SimOutcome run_to_completion(Simulation& sim);

} // namespace e2c::engine
