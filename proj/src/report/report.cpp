#include <e2c/report/report.hpp>

#include <e2c/core/errors.hpp>
#include <e2c/metrics/metrics.hpp>

namespace e2c::report {

namespace {

std::string opt_seconds(const std::optional<TimePoint>& t) { return t ? format_seconds(*t) : std::string{}; }

constexpr std::string_view kTaskHeader =
    "task_id,task_type,status,arrival,deadline,assigned_machine,assign_time,start_time,end_time,wait,response";
constexpr std::string_view kMachineHeader = "machine,completed,missed_dropped,busy_s,idle_s,utilization,energy_j";

void task_row(std::string& out, const engine::SimOutcome& outcome, const Task& t) {
    const auto machine_name = [&]() -> std::string {
        return t.assigned_machine ? outcome.machines.at(*t.assigned_machine).name : std::string{};
    };
    std::optional<Duration> wait;
    if (t.assign_time) wait = *t.assign_time - t.arrival;
    std::optional<Duration> response;
    if (t.status == TaskStatus::Completed) response = *t.finish - t.arrival;

    out += std::to_string(t.id);
    out += ',';
    out += outcome.task_type_names.at(t.type);
    out += ',';
    out += to_string(t.status);
    out += ',';
    out += format_seconds(t.arrival);
    out += ',';
    out += format_seconds(t.deadline);
    out += ',';
    out += machine_name();
    out += ',';
    out += opt_seconds(t.assign_time);
    out += ',';
    out += opt_seconds(t.start);
    out += ',';
    out += opt_seconds(t.finish);
    out += ',';
    out += opt_seconds(wait);
    out += ',';
    out += opt_seconds(response);
}

std::string machine_table(const engine::SimOutcome& outcome, const metrics::Summary& summary) {
    std::string out(kMachineHeader);
    out += '\n';
    for (const auto& ms : summary.machines) {
        out += outcome.machines.at(ms.machine).name;
        out += ',' + std::to_string(ms.completed);
        out += ',' + std::to_string(ms.missed);
        out += ',' + format_seconds(ms.busy_ticks);
        out += ',' + format_seconds(ms.idle_ticks);
        out += ',' + format_fixed(ms.utilization, 3);
        out += ',' + format_fixed(ms.energy_j, 3);
        out += '\n';
    }
    return out;
}

std::string task_table(const engine::SimOutcome& outcome, bool full) {
    std::string out(kTaskHeader);
    if (full) out += ",policy,predicted_completion,queue_wait";
    out += '\n';
    for (const auto& t : outcome.tasks) {
        task_row(out, outcome, t);
        if (full) {
            std::optional<Duration> queue_wait;
            if (t.start && t.assign_time) queue_wait = *t.start - *t.assign_time;
            out += ',' + outcome.config.policy;
            out += ',' + opt_seconds(t.predicted_completion);
            out += ',' + opt_seconds(queue_wait);
        }
        out += '\n';
    }
    return out;
}

std::string summary_table(const metrics::SummaryStats& s) {
    std::string out = "metric,value\n";
    out += "total_tasks," + std::to_string(s.total) + '\n';
    out += "completed," + std::to_string(s.completed) + '\n';
    out += "canceled," + std::to_string(s.canceled) + '\n';
    out += "missed," + std::to_string(s.missed) + '\n';
    out += "completion_pct," + format_fixed(s.completion_pct, 3) + '\n';
    out += "total_energy_j," + format_fixed(s.total_energy_j, 3) + '\n';
    out += "makespan," + format_seconds(s.makespan) + '\n';
    out += "mean_wait," + format_seconds(s.mean_wait) + '\n';
    out += "mean_response," + format_seconds(s.mean_response) + '\n';
    return out;
}

} // namespace

std::string_view to_string(ReportKind k) {
    switch (k) {
    case ReportKind::Full: return "full";
    case ReportKind::Task: return "task";
    case ReportKind::Machine: return "machine";
    case ReportKind::Summary: return "summary";
    }
    return "?";
}

ReportKind parse_report_kind(std::string_view text) {
    if (text == "full") return ReportKind::Full;
    if (text == "task") return ReportKind::Task;
    if (text == "machine") return ReportKind::Machine;
    if (text == "summary") return ReportKind::Summary;
    throw UsageError("unknown report kind '" + std::string(text) + "' (expected full|task|machine|summary)");
}

std::string render_report(const engine::SimOutcome& outcome, ReportKind kind) {
    switch (kind) {
    case ReportKind::Task: return task_table(outcome, false);
    case ReportKind::Machine: return machine_table(outcome, metrics::summarize(outcome));
    case ReportKind::Summary: return summary_table(metrics::summarize(outcome).stats);
    case ReportKind::Full: return task_table(outcome, true) + '\n' + machine_table(outcome, metrics::summarize(outcome));
    }
    throw UsageError("unknown report kind");
}

} // namespace e2c::report
