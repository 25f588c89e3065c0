#pragma once

#include <e2c/sched/registry.hpp>

#include <iosfwd>
#include <string>
#include <vector>

namespace e2c::cli {

enum ExitCode : int {
    kOk = 0,
    kUsage = 2,      // bad flags or arguments
    kInvalidInput = 3, // parse or validation failure
    kPortInUse = 4,
    kInternal = 1,
};

/// Entry point shared by the executable and the tests. `args` excludes the
/// program name: {"run", "--eet", ...}.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
            sched::PolicyRegistry& registry = sched::default_registry());

/// Hook for user-defined policies; called once before the CLI parses flags.
void register_custom_policies(sched::PolicyRegistry& registry);

} // namespace e2c::cli
