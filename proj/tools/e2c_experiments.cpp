// Intensity study over the shipped scenario pack: mean completion % per
// policy at 1x, 2x and 4x the base arrival rate, averaged over seeds.

#include <e2c/experiment/sweep.hpp>
#include <e2c/io/csv.hpp>

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <iostream>
#include <numeric>

using namespace e2c;

namespace {

void print_table(const std::string& title, const std::vector<experiment::IntensityCell>& cells,
                 const std::vector<double>& factors) {
    std::printf("\n%s\npolicy", title.c_str());
    for (double f : factors) std::printf(",x%g", f);
    std::printf("\n");
    for (std::size_t i = 0; i < cells.size(); i += factors.size()) {
        std::printf("%s", cells[i].policy.c_str());
        for (std::size_t j = 0; j < factors.size(); ++j) std::printf(",%.3f", cells[i + j].mean_completion_pct);
        std::printf("\n");
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Completion-rate tables for low/medium/high arrival intensity"};
    std::string dir = "scenarios";
    int seeds = 10;
    std::string queue = "3";
    bool serial = false;
    app.add_option("--scenario-dir", dir, "Directory holding the scenario pack");
    app.add_option("--seeds", seeds, "Workload seeds per intensity");
    app.add_option("--queue-size", queue, "Machine queue capacity for batch policies (or inf)");
    app.add_flag("--serial", serial, "Use the serial reference sweep");
    CLI11_PARSE(app, argc, argv);

    try {
        experiment::IntensityStudy study;
        study.machines = io::parse_machines_csv(io::read_file(dir + "/machines.csv"));
        study.base = io::parse_gen_spec_json(io::read_file(dir + "/gen_low.json"));
        study.rate_factors = {1.0, 2.0, 4.0};
        study.seeds.resize(static_cast<std::size_t>(seeds));
        std::iota(study.seeds.begin(), study.seeds.end(), std::uint64_t{1});
        if (queue != "inf") study.batch_capacity = std::stoul(queue);
        const auto& registry = sched::default_registry();

        const auto started = std::chrono::steady_clock::now();
        for (const auto* eet_file : {"eet_homogeneous.csv", "eet_heterogeneous.csv"}) {
            study.eet = io::parse_eet_csv(io::read_file(dir + "/" + eet_file));
            study.policies = {"fcfs", "mect", "meet"};
            print_table(std::string(eet_file) + " immediate", experiment::run_intensity_study(study, registry, !serial),
                        study.rate_factors);
            study.policies = {"mm", "mmu", "msd"};
            print_table(std::string(eet_file) + " batch", experiment::run_intensity_study(study, registry, !serial),
                        study.rate_factors);
        }
        const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - started);
        std::fprintf(stderr, "elapsed %lld ms\n", static_cast<long long>(ms.count()));
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
