#include <e2c/io/csv.hpp>

#include <e2c/core/errors.hpp>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <unordered_set>

namespace e2c::io {

namespace {

struct Line {
    std::size_t number;
    std::vector<std::string_view> cells;
};

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        auto pos = line.find(sep, start);
        if (pos == std::string_view::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

// Non-empty lines with their 1-based numbers; a trailing '\r' is tolerated.
std::vector<Line> read_lines(std::string_view text) {
    std::vector<Line> out;
    std::size_t number = 0;
    for (auto raw : split(text, '\n')) {
        ++number;
        if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
        if (raw.empty()) continue;
        out.push_back({number, split(raw, ',')});
    }
    return out;
}

[[noreturn]] void fail(std::size_t row, const std::string& what) {
    throw ParseError("row " + std::to_string(row) + ": " + what);
}

bool valid_name(std::string_view s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
        return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_' || c == '-';
    });
}

void expect_name(std::size_t row, std::string_view s) {
    if (!valid_name(s)) fail(row, "invalid name '" + std::string(s) + "'");
}

void expect_header(const Line& line, const std::vector<std::string_view>& want) {
    if (line.cells != want) {
        std::string joined;
        for (auto w : want) {
            if (!joined.empty()) joined += ',';
            joined += w;
        }
        fail(line.number, "expected header '" + joined + "'");
    }
}

Ticks seconds_cell(std::size_t row, std::string_view cell) {
    try {
        return parse_seconds(cell);
    } catch (const ParseError& e) {
        fail(row, e.what());
    }
}

double double_cell(std::size_t row, std::string_view cell) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (ec != std::errc{} || ptr != cell.data() + cell.size() || cell.empty()) {
        fail(row, "non-numeric value '" + std::string(cell) + "'");
    }
    return v;
}

std::string trimmed_decimal(double v) {
    std::string s = format_fixed(v, 6);
    if (s.find('.') != std::string::npos) {
        while (s.back() == '0') s.pop_back();
        if (s.back() == '.') s.pop_back();
    }
    return s;
}

} // namespace

EetMatrix parse_eet_csv(std::string_view text) {
    const auto lines = read_lines(text);
    if (lines.empty()) throw ParseError("row 1: empty EET file");
    const auto& header = lines.front();
    if (header.cells.front() != "task_type") fail(header.number, "expected header starting with 'task_type'");
    if (header.cells.size() < 2) fail(header.number, "EET needs at least one machine column");
    std::vector<std::string> machines;
    for (std::size_t i = 1; i < header.cells.size(); ++i) {
        expect_name(header.number, header.cells[i]);
        machines.emplace_back(header.cells[i]);
    }

    std::vector<std::string> types;
    std::vector<std::vector<EetEntry>> rows;
    std::unordered_set<std::string> seen;
    for (std::size_t li = 1; li < lines.size(); ++li) {
        const auto& line = lines[li];
        if (line.cells.size() != machines.size() + 1) {
            fail(line.number, "expected " + std::to_string(machines.size()) + " entries");
        }
        std::string name(line.cells.front());
        expect_name(line.number, name);
        if (!seen.insert(name).second) fail(line.number, "duplicate task type " + name);
        std::vector<EetEntry> row;
        bool any_finite = false;
        for (std::size_t i = 1; i < line.cells.size(); ++i) {
            if (line.cells[i] == "inf") {
                row.emplace_back(std::nullopt);
                continue;
            }
            const Ticks d = seconds_cell(line.number, line.cells[i]);
            if (d.count() <= 0) fail(line.number, "execution time must be positive");
            row.emplace_back(d);
            any_finite = true;
        }
        if (!any_finite) fail(line.number, "task type " + name + " is unsupported on every machine");
        types.push_back(std::move(name));
        rows.push_back(std::move(row));
    }
    return EetMatrix(std::move(types), std::move(machines), std::move(rows));
}

std::string format_eet_csv(const EetMatrix& eet) {
    std::string out = "task_type";
    for (const auto& m : eet.machine_names()) out += ',' + m;
    out += '\n';
    for (const auto& t : eet.task_types()) {
        out += t.name;
        for (MachineIndex m = 0; m < eet.machine_count(); ++m) {
            out += ',';
            const auto& e = eet.at(t.id, m);
            out += e ? format_seconds(*e) : "inf";
        }
        out += '\n';
    }
    return out;
}

std::vector<WorkloadRow> parse_workload_rows(std::string_view text) {
    const auto lines = read_lines(text);
    if (lines.empty()) throw ParseError("row 1: empty workload file");
    expect_header(lines.front(), {"task_id", "task_type", "arrival_time", "deadline"});
    std::vector<WorkloadRow> rows;
    for (std::size_t li = 1; li < lines.size(); ++li) {
        const auto& line = lines[li];
        if (line.cells.size() != 4) fail(line.number, "expected 4 entries");
        WorkloadRow row;
        row.line = line.number;
        const auto id_text = line.cells[0];
        auto [ptr, ec] = std::from_chars(id_text.data(), id_text.data() + id_text.size(), row.id);
        if (ec != std::errc{} || ptr != id_text.data() + id_text.size() || row.id < 0) {
            fail(line.number, "invalid task id '" + std::string(id_text) + "'");
        }
        expect_name(line.number, line.cells[1]);
        row.type_name = std::string(line.cells[1]);
        row.arrival = seconds_cell(line.number, line.cells[2]);
        row.deadline = seconds_cell(line.number, line.cells[3]);
        rows.push_back(std::move(row));
    }
    return rows;
}

ValidationReport check_workload_rows(const std::vector<WorkloadRow>& rows, const EetMatrix& eet) {
    ValidationReport report;
    std::unordered_set<TaskId> ids;
    for (const auto& row : rows) {
        const std::string entity = "task " + std::to_string(row.id);
        if (!eet.find_type(row.type_name)) {
            report.violations.push_back(
                {entity, "unknown task type " + row.type_name + ", task id " + std::to_string(row.id)});
        }
        if (row.deadline < row.arrival) {
            report.violations.push_back({entity, "deadline before arrival, task id " + std::to_string(row.id)});
        }
        if (!ids.insert(row.id).second) {
            report.violations.push_back({entity, "duplicate task id " + std::to_string(row.id)});
        }
    }
    return report;
}

std::vector<Task> parse_workload_csv(std::string_view text, const EetMatrix& eet) {
    const auto rows = parse_workload_rows(text);
    if (auto report = check_workload_rows(rows, eet); !report.ok()) {
        throw ParseError(report.violations.front().message);
    }
    std::vector<Task> tasks;
    tasks.reserve(rows.size());
    for (const auto& row : rows) {
        Task t;
        t.id = row.id;
        t.type = *eet.find_type(row.type_name);
        t.arrival = row.arrival;
        t.deadline = row.deadline;
        tasks.push_back(t);
    }
    std::stable_sort(tasks.begin(), tasks.end(), [](const Task& a, const Task& b) {
        return std::tie(a.arrival, a.id) < std::tie(b.arrival, b.id);
    });
    return tasks;
}

std::string format_workload_csv(const std::vector<Task>& workload, const EetMatrix& eet) {
    std::string out = "task_id,task_type,arrival_time,deadline\n";
    for (const auto& t : workload) {
        out += std::to_string(t.id);
        out += ',';
        out += eet.task_types().at(t.type).name;
        out += ',';
        out += format_seconds(t.arrival);
        out += ',';
        out += format_seconds(t.deadline);
        out += '\n';
    }
    return out;
}

std::vector<MachineSpec> parse_machines_csv(std::string_view text) {
    const auto lines = read_lines(text);
    if (lines.empty()) throw ParseError("row 1: empty machines file");
    expect_header(lines.front(), {"machine", "idle_power_w", "busy_power_w"});
    std::vector<MachineSpec> out;
    for (std::size_t li = 1; li < lines.size(); ++li) {
        const auto& line = lines[li];
        if (line.cells.size() != 3) fail(line.number, "expected 3 entries");
        expect_name(line.number, line.cells[0]);
        MachineSpec spec;
        spec.index = out.size();
        spec.name = std::string(line.cells[0]);
        spec.idle_power_w = double_cell(line.number, line.cells[1]);
        spec.busy_power_w = double_cell(line.number, line.cells[2]);
        if (spec.idle_power_w < 0.0) fail(line.number, "idle power must be non-negative");
        if (spec.busy_power_w < spec.idle_power_w) fail(line.number, "busy power below idle power");
        out.push_back(std::move(spec));
    }
    return out;
}

std::string format_machines_csv(const std::vector<MachineSpec>& machines) {
    std::string out = "machine,idle_power_w,busy_power_w\n";
    for (const auto& m : machines) {
        out += m.name + ',' + trimmed_decimal(m.idle_power_w) + ',' + trimmed_decimal(m.busy_power_w) + '\n';
    }
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, std::string_view contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ParseError("cannot write " + path);
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
}

Scenario load_scenario_text(std::string_view eet_csv, std::string_view machines_csv, std::string_view workload_csv,
                            ValidationReport* report_out) {
    Scenario s;
    s.eet = parse_eet_csv(eet_csv);
    s.machines = parse_machines_csv(machines_csv);
    const auto rows = parse_workload_rows(workload_csv);
    ValidationReport report = check_workload_rows(rows, s.eet);
    if (report.ok()) s.workload = parse_workload_csv(workload_csv, s.eet);
    auto rest = validate_scenario(s.eet, s.machines, s.workload);
    report.violations.insert(report.violations.end(), rest.violations.begin(), rest.violations.end());
    if (report_out) *report_out = report;
    if (!report.ok()) throw ConfigError("incompatible scenario:\n" + report.to_string());
    return s;
}

} // namespace e2c::io
