#pragma once

#include <e2c/engine/simulation.hpp>
#include <e2c/io/workload_gen.hpp>
#include <e2c/metrics/metrics.hpp>
#include <e2c/sched/registry.hpp>

#include <memory>
#include <span>
#include <string>
#include <vector>

namespace e2c::experiment {

/// One independent simulation run.
struct RunCase {
    std::shared_ptr<const Scenario> scenario;
    SimConfig config;
};

/// Reference path: runs the cases one after another.
std::vector<engine::SimOutcome> run_serial(std::span<const RunCase> cases, const sched::PolicyRegistry& registry);

/// Same results as run_serial, with cases spread over OpenMP threads.
/// Output order matches input order.
std::vector<engine::SimOutcome> run_parallel(std::span<const RunCase> cases, const sched::PolicyRegistry& registry);

/// Config whose mode follows the policy's declared mode.
SimConfig config_for(const sched::PolicyRegistry& registry, const std::string& policy,
                     std::optional<std::size_t> batch_capacity, std::uint64_t seed = 0);

/// Completion study over arrival-rate multipliers: every exponential rate
/// in `base` is multiplied by each factor, and each (factor, seed) workload
/// is run under every policy. Batch policies use `batch_capacity`.
struct IntensityStudy {
    EetMatrix eet;
    std::vector<MachineSpec> machines;
    io::WorkloadGenSpec base;
    std::vector<double> rate_factors;
    std::vector<std::uint64_t> seeds;
    std::vector<std::string> policies;
    std::optional<std::size_t> batch_capacity;
};

struct IntensityCell {
    std::string policy;
    double rate_factor = 1.0;
    double mean_completion_pct = 0.0;
    double mean_energy_j = 0.0;
    std::size_t mean_tasks = 0;
};

/// Rows ordered by policy (as given), then factor.
std::vector<IntensityCell> run_intensity_study(const IntensityStudy& study, const sched::PolicyRegistry& registry,
                                               bool parallel = true);

} // namespace e2c::experiment
