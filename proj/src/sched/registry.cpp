#include <e2c/sched/registry.hpp>

#include <e2c/core/errors.hpp>
#include <e2c/sched/policies.hpp>

#include <algorithm>
#include <cctype>

namespace e2c::sched {

std::string normalize_policy_name(std::string_view name) {
    std::string out(name);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

PolicyRegistry PolicyRegistry::with_builtins() {
    PolicyRegistry r;
    r.register_policy("fcfs", SchedulingMode::Immediate, fcfs_select);
    r.register_policy("mect", SchedulingMode::Immediate, mect_select);
    r.register_policy("meet", SchedulingMode::Immediate, meet_select);
    r.register_policy("mm", SchedulingMode::Batch, min_min_select);
    r.register_policy("mmu", SchedulingMode::Batch, mmu_select);
    r.register_policy("msd", SchedulingMode::Batch, msd_select);
    return r;
}

std::string PolicyRegistry::register_policy(std::string_view name, SchedulingMode mode, SelectFn select) {
    auto key = normalize_policy_name(name);
    if (key.empty()) throw ConfigError("policy name must not be empty");
    if (!select) throw ConfigError("policy " + key + " has no select function");
    if (policies_.contains(key)) throw ConfigError("policy already registered: " + key);
    policies_.emplace(key, std::make_shared<const Policy>(Policy{key, mode, std::move(select)}));
    return key;
}

std::shared_ptr<const Policy> PolicyRegistry::get(std::string_view name) const {
    auto it = policies_.find(normalize_policy_name(name));
    if (it == policies_.end()) throw ConfigError("unknown policy: " + std::string(name));
    return it->second;
}

bool PolicyRegistry::contains(std::string_view name) const {
    return policies_.contains(normalize_policy_name(name));
}

std::vector<std::shared_ptr<const Policy>> PolicyRegistry::list() const {
    std::vector<std::shared_ptr<const Policy>> out;
    for (const auto& [_, p] : policies_) out.push_back(p);
    return out;
}

PolicyRegistry& default_registry() {
    static PolicyRegistry registry = PolicyRegistry::with_builtins();
    return registry;
}

void check_config(const SimConfig& config, const Policy& policy) {
    if (config.mode != policy.mode) {
        throw ConfigError("policy " + policy.name + " is a " + std::string(to_string(policy.mode)) +
                          " policy but the configuration requests " + std::string(to_string(config.mode)) +
                          " mode");
    }
    if (config.mode == SchedulingMode::Immediate && config.machine_queue_capacity) {
        throw ConfigError("immediate policies require an unbounded machine queue (inf)");
    }
    if (config.machine_queue_capacity && *config.machine_queue_capacity == 0) {
        throw ConfigError("machine queue capacity must be positive");
    }
}

} // namespace e2c::sched
