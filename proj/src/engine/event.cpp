#include <e2c/engine/event.hpp>

namespace e2c::engine {

std::string_view to_string(EventKind k) {
    switch (k) {
    case EventKind::Completion: return "completion";
    case EventKind::DeadlineCheck: return "deadline";
    case EventKind::Arrival: return "arrival";
    case EventKind::SchedulerWake: return "wake";
    }
    return "?";
}

std::string format_event_log(const std::vector<StepResult>& log) {
    std::string out;
    for (const auto& r : log) {
        out += std::to_string(r.seq);
        out += ' ';
        out += format_seconds(r.event.time);
        out += ' ';
        out += to_string(r.event.kind);
        out += ' ';
        out += std::to_string(r.event.entity);
        for (const auto& c : r.changes) {
            out += " | ";
            out += std::to_string(c.task);
            out += ':';
            out += to_string(c.from);
            out += "->";
            out += to_string(c.to);
            if (c.machine) {
                out += '@';
                out += std::to_string(*c.machine);
            }
        }
        out += '\n';
    }
    return out;
}

} // namespace e2c::engine
