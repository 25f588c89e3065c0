#pragma once

#include <e2c/engine/simulation.hpp>

#include <optional>
#include <string>
#include <string_view>

namespace e2c::report {

enum class ReportKind { Full, Task, Machine, Summary };

[[nodiscard]] std::string_view to_string(ReportKind k);
/// Accepts `full|task|machine|summary`; throws UsageError otherwise.
[[nodiscard]] ReportKind parse_report_kind(std::string_view text);

/// CSV text for a finished outcome. Tasks by id, machines by index; times
/// in seconds with at most six decimals, ratios and joules with three.
std::string render_report(const engine::SimOutcome& outcome, ReportKind kind);

} // namespace e2c::report
