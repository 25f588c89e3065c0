#include <e2c/metrics/metrics.hpp>

namespace e2c::metrics {

namespace {

// Integer mean rounded half away from zero; inputs are non-negative.
Duration mean_of(std::int64_t sum, std::size_t n) {
    if (n == 0) return Duration{0};
    const auto d = static_cast<std::int64_t>(n);
    return Duration{(sum + d / 2) / d};
}

} // namespace

double machine_energy(Duration busy, Duration idle, const MachineSpec& spec) {
    return spec.busy_power_w * busy.seconds() + spec.idle_power_w * idle.seconds();
}

Summary summarize(const engine::SimOutcome& outcome) {
    Summary out;
    auto& s = out.stats;
    s.total = outcome.tasks.size();
    s.makespan = outcome.makespan;

    for (std::size_t m = 0; m < outcome.machines.size(); ++m) {
        MachineStats ms;
        ms.machine = m;
        ms.busy_ticks = outcome.busy_ticks[m];
        ms.idle_ticks = outcome.idle_ticks[m];
        const auto span = ms.busy_ticks + ms.idle_ticks;
        ms.utilization = span.count() == 0 ? 0.0 : static_cast<double>(ms.busy_ticks.count()) / static_cast<double>(span.count());
        ms.energy_j = machine_energy(ms.busy_ticks, ms.idle_ticks, outcome.machines[m]);
        out.machines.push_back(ms);
    }

    std::int64_t wait_sum = 0;
    std::size_t assigned = 0;
    std::int64_t response_sum = 0;
    for (const auto& t : outcome.tasks) {
        switch (t.status) {
        case TaskStatus::Completed: ++s.completed; break;
        case TaskStatus::Canceled: ++s.canceled; break;
        case TaskStatus::Missed: ++s.missed; break;
        default: break;
        }
        if (t.assigned_machine) {
            auto& ms = out.machines.at(*t.assigned_machine);
            if (t.status == TaskStatus::Completed) ++ms.completed;
            if (t.status == TaskStatus::Missed) ++ms.missed;
        }
        if (t.assign_time) {
            wait_sum += (*t.assign_time - t.arrival).count();
            ++assigned;
        }
        if (t.status == TaskStatus::Completed) response_sum += (*t.finish - t.arrival).count();
    }
    s.completion_pct = s.total == 0 ? 100.0 : 100.0 * static_cast<double>(s.completed) / static_cast<double>(s.total);
    for (const auto& ms : out.machines) s.total_energy_j += ms.energy_j;
    s.mean_wait = mean_of(wait_sum, assigned);
    s.mean_response = mean_of(response_sum, s.completed);
    return out;
}

} // namespace e2c::metrics
