#include <e2c/core/model.hpp>

#include <e2c/core/errors.hpp>

#include <set>
#include <unordered_set>

namespace e2c {

EetMatrix::EetMatrix(std::vector<std::string> task_type_names,
                     std::vector<std::string> machine_names,
                     std::vector<std::vector<EetEntry>> rows)
    : machine_names_(std::move(machine_names)) {
    if (task_type_names.size() != rows.size()) {
        throw ConfigError("EET: " + std::to_string(task_type_names.size()) + " type names but " +
                          std::to_string(rows.size()) + " rows");
    }
    std::set<std::string> seen_types;
    std::set<std::string> seen_machines;
    for (const auto& m : machine_names_) {
        if (!seen_machines.insert(m).second) throw ConfigError("EET: duplicate machine name " + m);
    }
    cells_.reserve(rows.size() * machine_names_.size());
    for (std::size_t t = 0; t < rows.size(); ++t) {
        const auto& name = task_type_names[t];
        if (!seen_types.insert(name).second) throw ConfigError("EET: duplicate task type " + name);
        if (rows[t].size() != machine_names_.size()) {
            throw ConfigError("EET: row " + name + " has " + std::to_string(rows[t].size()) +
                              " entries, expected " + std::to_string(machine_names_.size()));
        }
        bool any_finite = false;
        for (const auto& cell : rows[t]) {
            if (cell) {
                if (cell->count() <= 0) throw ConfigError("EET: non-positive entry in row " + name);
                any_finite = true;
            }
            cells_.push_back(cell);
        }
        if (!any_finite) throw ConfigError("EET: task type " + name + " is unsupported on every machine");
        types_.push_back(TaskType{t, name});
    }
}

EetEntry EetMatrix::lookup(TaskTypeId type, MachineIndex machine) const {
    if (type >= types_.size() || machine >= machine_names_.size()) {
        throw UsageError("EET lookup out of range: type " + std::to_string(type) + ", machine " +
                         std::to_string(machine));
    }
    return at(type, machine);
}

std::optional<TaskTypeId> EetMatrix::find_type(std::string_view name) const {
    for (const auto& t : types_) {
        if (t.name == name) return t.id;
    }
    return std::nullopt;
}

double EetMatrix::mean_finite(TaskTypeId type) const {
    double sum = 0.0;
    int n = 0;
    for (MachineIndex m = 0; m < machine_count(); ++m) {
        if (const auto& e = at(type, m)) {
            sum += static_cast<double>(e->count());
            ++n;
        }
    }
    return n == 0 ? 0.0 : sum / n;
}

EetMatrix EetMatrix::scaled(std::int64_t k) const {
    EetMatrix out = *this;
    for (auto& c : out.cells_) {
        if (c) c = *c * k;
    }
    return out;
}

std::string_view to_string(TaskStatus s) {
    switch (s) {
    case TaskStatus::Pending: return "pending";
    case TaskStatus::Batched: return "batched";
    case TaskStatus::Queued: return "queued";
    case TaskStatus::Executing: return "executing";
    case TaskStatus::Completed: return "completed";
    case TaskStatus::Canceled: return "canceled";
    case TaskStatus::Missed: return "missed";
    }
    return "?";
}

bool is_terminal(TaskStatus s) {
    return s == TaskStatus::Completed || s == TaskStatus::Canceled || s == TaskStatus::Missed;
}

bool is_legal_transition(TaskStatus from, TaskStatus to) {
    using S = TaskStatus;
    switch (from) {
    case S::Pending: return to == S::Batched;
    case S::Batched: return to == S::Canceled || to == S::Queued;
    case S::Queued: return to == S::Missed || to == S::Executing;
    case S::Executing: return to == S::Missed || to == S::Completed;
    default: return false;
    }
}

std::string_view to_string(SchedulingMode m) {
    return m == SchedulingMode::Immediate ? "immediate" : "batch";
}

std::string ValidationReport::to_string() const {
    std::string out;
    for (const auto& v : violations) {
        out += v.message;
        out += '\n';
    }
    return out;
}

ValidationReport validate_scenario(const EetMatrix& eet,
                                   const std::vector<MachineSpec>& machines,
                                   const std::vector<Task>& workload) {
    ValidationReport report;
    const auto& names = eet.machine_names();
    if (machines.size() != names.size()) {
        report.violations.push_back(
            {"machines", "machine count mismatch: machines file has " + std::to_string(machines.size()) +
                             ", EET has " + std::to_string(names.size())});
    } else {
        for (std::size_t i = 0; i < machines.size(); ++i) {
            if (machines[i].name != names[i]) {
                report.violations.push_back({machines[i].name, "machine name mismatch at column " +
                                                                   std::to_string(i) + ": '" + machines[i].name +
                                                                   "' vs EET '" + names[i] + "'"});
            }
        }
    }
    std::unordered_set<TaskId> ids;
    for (const auto& task : workload) {
        const std::string entity = "task " + std::to_string(task.id);
        if (task.type >= eet.type_count()) {
            report.violations.push_back(
                {entity, "unknown task type index " + std::to_string(task.type) + ", task id " + std::to_string(task.id)});
        }
        if (task.deadline < task.arrival) {
            report.violations.push_back({entity, "deadline before arrival, task id " + std::to_string(task.id)});
        }
        if (task.id < 0 || !ids.insert(task.id).second) {
            report.violations.push_back({entity, "duplicate or negative task id " + std::to_string(task.id)});
        }
    }
    return report;
}

Scenario rescale_scenario(const Scenario& s, std::int64_t k) {
    Scenario out{s.eet.scaled(k), s.machines, s.workload};
    for (auto& t : out.workload) {
        t.arrival = t.arrival * k;
        t.deadline = t.deadline * k;
    }
    return out;
}

} // namespace e2c
