#pragma once

#include <e2c/core/model.hpp>

#include <string>
#include <string_view>
#include <vector>

namespace e2c::io {

/// `task_type,<machine...>` header, then one row per type with seconds or `inf`.
EetMatrix parse_eet_csv(std::string_view text);
std::string format_eet_csv(const EetMatrix& eet);

/// Workload row before it is resolved against an EET.
struct WorkloadRow {
    std::size_t line = 0;
    TaskId id = 0;
    std::string type_name;
    TimePoint arrival;
    TimePoint deadline;
};

/// Syntax-only pass over `task_id,task_type,arrival_time,deadline`.
std::vector<WorkloadRow> parse_workload_rows(std::string_view text);

/// Compatibility of raw rows with an EET: unknown types, deadline before
/// arrival, duplicate ids. One violation per offending row.
ValidationReport check_workload_rows(const std::vector<WorkloadRow>& rows, const EetMatrix& eet);

/// Full parse: throws ParseError naming the first incompatible task.
/// Output is sorted by (arrival, id) with status Pending.
std::vector<Task> parse_workload_csv(std::string_view text, const EetMatrix& eet);
std::string format_workload_csv(const std::vector<Task>& workload, const EetMatrix& eet);

/// `machine,idle_power_w,busy_power_w`; indices follow file order.
std::vector<MachineSpec> parse_machines_csv(std::string_view text);
std::string format_machines_csv(const std::vector<MachineSpec>& machines);

/// Reads a whole file; throws ParseError if it cannot be opened.
std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

/// Parses all three files and validates them together. Throws ParseError
/// on syntax errors and engine-independent ConfigError on violations.
Scenario load_scenario_text(std::string_view eet_csv, std::string_view machines_csv, std::string_view workload_csv,
                            ValidationReport* report = nullptr);

} // namespace e2c::io
