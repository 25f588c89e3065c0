#include <e2c/cli/commands.hpp>

#include <iostream>

int main(int argc, char** argv) {
    auto& registry = e2c::sched::default_registry();
    e2c::cli::register_custom_policies(registry);
    std::vector<std::string> args(argv + 1, argv + argc);
    return e2c::cli::run_cli(args, std::cout, std::cerr, registry);
}
