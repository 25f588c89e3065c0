#include "fixtures.hpp"

#include <algorithm>

namespace e2c::testing {

Scenario two_by_two(std::vector<Task> workload) {
    EetMatrix eet({"T1", "T2"}, {"M0", "M1"}, {{sec(2), sec(4)}, {sec(3), sec(1)}});
    std::vector<MachineSpec> machines{{0, "M0", 10.0, 50.0}, {1, "M1", 10.0, 50.0}};
    return Scenario{std::move(eet), std::move(machines), std::move(workload)};
}

Task make_task(TaskId id, TaskTypeId type, double arrival_s, double deadline_s) {
    Task t;
    t.id = id;
    t.type = type;
    t.arrival = sec(arrival_s);
    t.deadline = sec(deadline_s);
    return t;
}

std::shared_ptr<const Scenario> share(Scenario s) { return std::make_shared<const Scenario>(std::move(s)); }

engine::SimOutcome run_policy(const Scenario& s, const std::string& policy, std::optional<std::size_t> capacity) {
    const auto& registry = sched::default_registry();
    auto p = registry.get(policy);
    SimConfig config;
    config.policy = p->name;
    config.mode = p->mode;
    config.machine_queue_capacity = p->mode == SchedulingMode::Batch ? capacity : std::nullopt;
    engine::Simulation sim(share(s), config, p);
    return engine::run_to_completion(sim);
}

Scenario random_scenario(std::mt19937_64& rng, const RandomScenarioLimits& limits) {
    auto pick = [&](std::size_t lo, std::size_t hi) { return std::uniform_int_distribution<std::size_t>(lo, hi)(rng); };
    auto unit = [&] { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); };

    const std::size_t machines = pick(limits.min_machines, limits.max_machines);
    const std::size_t types = pick(limits.min_types, limits.max_types);
    const std::size_t tasks = pick(limits.min_tasks, limits.max_tasks);

    std::vector<std::string> type_names, machine_names;
    for (std::size_t t = 0; t < types; ++t) type_names.push_back("T" + std::to_string(t + 1));
    for (std::size_t m = 0; m < machines; ++m) machine_names.push_back("M" + std::to_string(m));

    std::vector<std::vector<EetEntry>> rows(types);
    double mean_eet = 0.0;
    for (auto& row : rows) {
        for (std::size_t m = 0; m < machines; ++m) {
            if (unit() < 0.2) {
                row.emplace_back(std::nullopt);
            } else {
                const auto ms = static_cast<std::int64_t>(pick(100, 5000));
                row.emplace_back(Ticks{ms * 1000});
                mean_eet += static_cast<double>(ms) / 1000.0;
            }
        }
        if (std::none_of(row.begin(), row.end(), [](const auto& e) { return e.has_value(); })) {
            row[pick(0, machines - 1)] = Ticks{static_cast<std::int64_t>(pick(100, 5000)) * 1000};
        }
    }
    mean_eet = std::max(mean_eet / static_cast<double>(types * machines), 0.5);

    std::vector<MachineSpec> specs;
    for (std::size_t m = 0; m < machines; ++m) {
        const double idle = static_cast<double>(pick(0, 20));
        specs.push_back({m, machine_names[m], idle, idle + static_cast<double>(pick(0, 100))});
    }

    const double load = 0.3 + 2.7 * unit();
    const double horizon_s = static_cast<double>(tasks) * mean_eet / static_cast<double>(machines) / load;
    std::vector<Task> workload;
    for (std::size_t i = 0; i < tasks; ++i) {
        Task t;
        t.id = static_cast<TaskId>(i);
        t.type = pick(0, types - 1);
        t.arrival = Ticks{static_cast<std::int64_t>(unit() * horizon_s * 1000) * 1000};
        const double slack = unit() < 0.03 ? 0.0 : (0.2 + 4.0 * unit()) * mean_eet;
        t.deadline = t.arrival + Ticks{static_cast<std::int64_t>(slack * 1000) * 1000};
        workload.push_back(t);
    }
    return Scenario{EetMatrix(type_names, machine_names, rows), std::move(specs), std::move(workload)};
}

std::optional<std::size_t> random_capacity(std::mt19937_64& rng) {
    const auto k = std::uniform_int_distribution<int>(0, 4)(rng);
    if (k == 0) return std::nullopt;
    return static_cast<std::size_t>(k);
}

PolicyInstance random_instance(std::mt19937_64& rng, bool all_idle) {
    std::uniform_int_distribution<int> count(1, 5), ms(1, 5000), coin(0, 4);
    const int machines = count(rng), types = count(rng), tasks = count(rng);
    std::vector<std::string> tn, mn;
    for (int t = 0; t < types; ++t) tn.push_back("T" + std::to_string(t));
    for (int m = 0; m < machines; ++m) mn.push_back("M" + std::to_string(m));
    std::vector<std::vector<EetEntry>> rows(types);
    for (auto& row : rows) {
        for (int m = 0; m < machines; ++m) {
            if (coin(rng) == 0) row.emplace_back(std::nullopt);
            else row.emplace_back(Ticks{ms(rng) * 1000LL});
        }
        if (std::none_of(row.begin(), row.end(), [](const auto& e) { return e.has_value(); })) row[0] = sec(1);
    }
    PolicyInstance r{EetMatrix(tn, mn, rows), {}, {}, Ticks{ms(rng) * 1000LL}};
    for (int i = 0; i < tasks; ++i) {
        const auto type = static_cast<TaskTypeId>(std::uniform_int_distribution<int>(0, types - 1)(rng));
        r.batch.push_back({i, type, r.clock, r.clock + Ticks{ms(rng) * 2000LL}});
    }
    for (int m = 0; m < machines; ++m) {
        sched::MachineView v{static_cast<MachineIndex>(m), std::nullopt, 0, r.clock};
        if (!all_idle) {
            v.task_count = static_cast<std::size_t>(coin(rng));
            if (v.task_count > 0) v.ready_time = r.clock + Ticks{ms(rng) * 1000LL};
            if (coin(rng) == 0) v.free_slots = static_cast<std::size_t>(coin(rng) % 2);
        }
        r.machines.push_back(v);
    }
    return r;
}

} // namespace e2c::testing
