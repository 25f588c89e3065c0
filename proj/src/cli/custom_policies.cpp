#include <e2c/cli/commands.hpp>

namespace e2c::cli {

// Add your own scheduling methods here, e.g.
//   registry.register_policy("my-policy", SchedulingMode::Batch, my_select);
// where my_select has the sched::SelectFn signature. Registered names become
// valid for `run --policy` and for the service.
void register_custom_policies(sched::PolicyRegistry& /*registry*/) {}

} // namespace e2c::cli
