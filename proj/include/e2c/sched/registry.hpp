#pragma once

#include <e2c/sched/policy.hpp>

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace e2c::sched {

/// Name -> policy table. Names are case-insensitive and stored lowercase.
///
/// Lookups are safe from many threads; registration is not synchronized and
/// belongs at start-up, before any simulation is created.
class PolicyRegistry {
public:
    /// Registry holding fcfs, mect, meet, mm, mmu, msd.
    static PolicyRegistry with_builtins();

    /// Throws ConfigError on a duplicate name. Returns the normalized name.
    std::string register_policy(std::string_view name, SchedulingMode mode, SelectFn select);

    /// Throws ConfigError for unknown names.
    [[nodiscard]] std::shared_ptr<const Policy> get(std::string_view name) const;
    [[nodiscard]] bool contains(std::string_view name) const;

    /// Sorted by name.
    [[nodiscard]] std::vector<std::shared_ptr<const Policy>> list() const;

private:
    std::map<std::string, std::shared_ptr<const Policy>, std::less<>> policies_;
};

/// Process-wide registry used by the CLI and the service.
PolicyRegistry& default_registry();

[[nodiscard]] std::string normalize_policy_name(std::string_view name);

/// Checks that the config's mode matches the policy and that immediate mode
/// runs with unbounded queues. Throws ConfigError.
void check_config(const SimConfig& config, const Policy& policy);

} // namespace e2c::sched
