#include <e2c/experiment/sweep.hpp>

#include <exception>
#include <optional>

namespace e2c::experiment {

namespace {

engine::SimOutcome run_one(const RunCase& c, const sched::PolicyRegistry& registry) {
    engine::Simulation sim(c.scenario, c.config, registry.get(c.config.policy));
    return engine::run_to_completion(sim);
}

io::WorkloadGenSpec scaled_spec(const io::WorkloadGenSpec& base, double factor, std::uint64_t seed) {
    auto spec = base;
    spec.seed = seed;
    for (auto& t : spec.types) {
        if (auto* e = std::get_if<io::ExponentialArrivals>(&t.process)) e->rate_per_s *= factor;
    }
    return spec;
}

} // namespace

std::vector<engine::SimOutcome> run_serial(std::span<const RunCase> cases, const sched::PolicyRegistry& registry) {
    std::vector<engine::SimOutcome> out;
    out.reserve(cases.size());
    for (const auto& c : cases) out.push_back(run_one(c, registry));
    return out;
}

std::vector<engine::SimOutcome> run_parallel(std::span<const RunCase> cases, const sched::PolicyRegistry& registry) {
    std::vector<engine::SimOutcome> out(cases.size());
    std::exception_ptr first_error;
    const auto n = static_cast<std::ptrdiff_t>(cases.size());
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        try {
            out[i] = run_one(cases[i], registry);
        } catch (...) {
#pragma omp critical(e2c_sweep_error)
            if (!first_error) first_error = std::current_exception();
        }
    }
    if (first_error) std::rethrow_exception(first_error);
    return out;
}

SimConfig config_for(const sched::PolicyRegistry& registry, const std::string& policy,
                     std::optional<std::size_t> batch_capacity, std::uint64_t seed) {
    const auto p = registry.get(policy);
    SimConfig config;
    config.policy = p->name;
    config.mode = p->mode;
    config.machine_queue_capacity = p->mode == SchedulingMode::Batch ? batch_capacity : std::nullopt;
    config.seed = seed;
    return config;
}

std::vector<IntensityCell> run_intensity_study(const IntensityStudy& study, const sched::PolicyRegistry& registry,
                                               bool parallel) {
    // Workloads are shared by all policies at a given (factor, seed).
    std::vector<std::shared_ptr<const Scenario>> scenarios;
    for (double factor : study.rate_factors) {
        for (auto seed : study.seeds) {
            auto s = std::make_shared<Scenario>();
            s->eet = study.eet;
            s->machines = study.machines;
            s->workload = io::generate_workload(scaled_spec(study.base, factor, seed), study.eet);
            scenarios.push_back(std::move(s));
        }
    }

    std::vector<RunCase> cases;
    for (const auto& policy : study.policies) {
        const auto config = config_for(registry, policy, study.batch_capacity);
        for (const auto& s : scenarios) cases.push_back({s, config});
    }
    const auto outcomes = parallel ? run_parallel(cases, registry) : run_serial(cases, registry);

    std::vector<IntensityCell> cells;
    std::size_t k = 0;
    for (const auto& policy : study.policies) {
        for (double factor : study.rate_factors) {
            IntensityCell cell;
            cell.policy = registry.get(policy)->name;
            cell.rate_factor = factor;
            std::size_t tasks = 0;
            for (std::size_t s = 0; s < study.seeds.size(); ++s, ++k) {
                const auto summary = metrics::summarize(outcomes[k]).stats;
                cell.mean_completion_pct += summary.completion_pct;
                cell.mean_energy_j += summary.total_energy_j;
                tasks += summary.total;
            }
            const auto n = static_cast<double>(study.seeds.size());
            if (n > 0) {
                cell.mean_completion_pct /= n;
                cell.mean_energy_j /= n;
                cell.mean_tasks = tasks / study.seeds.size();
            }
            cells.push_back(cell);
        }
    }
    return cells;
}

} // namespace e2c::experiment
