#include <e2c/cli/commands.hpp>

#include <e2c/core/errors.hpp>
#include <e2c/engine/simulation.hpp>
#include <e2c/io/csv.hpp>
#include <e2c/io/workload_gen.hpp>
#include <e2c/report/report.hpp>
#include <e2c/service/http_server.hpp>

#include <CLI11.hpp>

#include <atomic>
#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <ostream>
#include <thread>

namespace e2c::cli {

namespace {

std::atomic<bool> g_interrupted{false};

extern "C" void on_signal(int) { g_interrupted.store(true); }

std::uint64_t seed_or_env(const std::optional<std::uint64_t>& flag) {
    if (flag) return *flag;
    if (const char* env = std::getenv("E2C_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw UsageError("E2C_SEED must be an unsigned integer");
        }
    }
    return 0;
}

std::optional<std::size_t> parse_capacity(const std::string& text) {
    if (text == "inf") return std::nullopt;
    std::size_t used = 0;
    long long v = 0;
    try {
        v = std::stoll(text, &used);
    } catch (const std::exception&) {
        throw UsageError("--queue-size must be a positive integer or inf");
    }
    if (used != text.size() || v <= 0) throw UsageError("--queue-size must be a positive integer or inf");
    return static_cast<std::size_t>(v);
}

struct RunArgs {
    std::string eet, workload, machines;
    std::string out_dir = ".";
    std::string policy = "mect";
    std::string queue_size = "inf";
    std::vector<std::string> reports{"summary"};
    std::optional<std::uint64_t> seed;
    std::string event_log;
};

int do_run(const RunArgs& a, std::ostream& out, std::ostream& err, sched::PolicyRegistry& registry) {
    std::shared_ptr<const sched::Policy> policy;
    SimConfig config;
    std::vector<report::ReportKind> kinds;
    try {
        policy = registry.get(a.policy);
        config.policy = policy->name;
        config.mode = policy->mode;
        config.machine_queue_capacity = parse_capacity(a.queue_size);
        config.seed = seed_or_env(a.seed);
        sched::check_config(config, *policy);
        for (const auto& r : a.reports) {
            if (r == "all") {
                kinds = {report::ReportKind::Full, report::ReportKind::Task, report::ReportKind::Machine,
                         report::ReportKind::Summary};
                break;
            }
            kinds.push_back(report::parse_report_kind(r));
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    }

    std::shared_ptr<const Scenario> scenario;
    try {
        ValidationReport report;
        try {
            scenario = std::make_shared<const Scenario>(io::load_scenario_text(
                io::read_file(a.eet), io::read_file(a.machines), io::read_file(a.workload), &report));
        } catch (const ConfigError&) {
            err << "error: incompatible scenario\n" << report.to_string();
            return kInvalidInput;
        }
    } catch (const ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kInvalidInput;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return kInvalidInput;
    }

    engine::Simulation sim(scenario, config, policy);
    const auto outcome = engine::run_to_completion(sim);

    try {
        std::filesystem::create_directories(a.out_dir);
        for (auto kind : kinds) {
            const auto path = std::filesystem::path(a.out_dir) / (std::string(report::to_string(kind)) + "_report.csv");
            io::write_file(path.string(), report::render_report(outcome, kind));
        }
        if (!a.event_log.empty()) io::write_file(a.event_log, engine::format_event_log(outcome.event_log));
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kInternal;
    }
    out << report::render_report(outcome, report::ReportKind::Summary);
    return kOk;
}

struct GenArgs {
    std::string eet;
    std::vector<std::string> types;
    std::string spec_file;
    std::optional<double> horizon;
    std::optional<double> beta;
    std::optional<std::uint64_t> seed;
    std::string output;
};

int do_gen(const GenArgs& a, std::ostream& out, std::ostream& err) {
    io::WorkloadGenSpec spec;
    try {
        if (!a.spec_file.empty()) spec = io::parse_gen_spec_json(io::read_file(a.spec_file));
        for (const auto& t : a.types) spec.types.push_back(io::parse_type_arrivals(t));
        if (a.horizon) spec.horizon = Ticks{static_cast<std::int64_t>(std::llround(*a.horizon * Ticks::kPerSecond))};
        if (a.beta) spec.beta = *a.beta;
        if (a.seed || a.spec_file.empty()) spec.seed = seed_or_env(a.seed);
        if (spec.types.empty()) throw UsageError("at least one --type (or a --spec file) is required");
        if (spec.horizon.count() <= 0) throw UsageError("--horizon must be positive");
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    }
    try {
        const auto eet = io::parse_eet_csv(io::read_file(a.eet));
        const auto text = io::format_workload_csv(io::generate_workload(spec, eet), eet);
        if (a.output.empty() || a.output == "-") {
            out << text;
        } else {
            io::write_file(a.output, text);
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kInvalidInput;
    }
    return kOk;
}

int do_serve(const std::string& host, int port, int idle_minutes, std::ostream& out, std::ostream& err,
             sched::PolicyRegistry& registry) {
    service::SessionManager sessions(registry, std::chrono::minutes(idle_minutes));
    service::HttpServer server(sessions);
    const int bound = server.bind(host, port);
    if (bound < 0) {
        err << "error: cannot listen on " << host << ':' << port << " (port in use?)\n";
        return kPortInUse;
    }
    // Handlers go in before the address is announced, so a client that
    // reacts to the announcement can always stop the server cleanly.
    g_interrupted = false;
    auto previous_int = std::signal(SIGINT, on_signal);
    auto previous_term = std::signal(SIGTERM, on_signal);
    out << "listening on http://" << host << ':' << bound << std::endl;
    std::atomic<bool> done{false};
    std::thread watcher([&] {
        while (!done.load()) {
            if (g_interrupted.load()) {
                server.stop();
                return;
            }
            std::this_thread::sleep_for(std::chrono::milliseconds(100));
        }
    });
    server.listen();
    done = true;
    watcher.join();
    std::signal(SIGINT, previous_int);
    std::signal(SIGTERM, previous_term);
    return kOk;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
            sched::PolicyRegistry& registry) {
    CLI::App app{"Heterogeneous computing scheduling simulator"};
    app.require_subcommand(1);

    RunArgs run;
    auto* run_cmd = app.add_subcommand("run", "Simulate a scenario and write reports");
    run_cmd->add_option("--eet", run.eet, "EET matrix CSV")->required();
    run_cmd->add_option("--workload", run.workload, "Workload CSV")->required();
    run_cmd->add_option("--machines", run.machines, "Machines CSV")->required();
    run_cmd->add_option("--policy", run.policy, "fcfs|mect|meet|mm|mmu|msd or a registered name");
    run_cmd->add_option("--queue-size", run.queue_size, "Machine queue capacity or inf");
    run_cmd->add_option("--report", run.reports, "full|task|machine|summary|all (repeatable)");
    run_cmd->add_option("--out-dir,-o", run.out_dir, "Directory for <kind>_report.csv files");
    run_cmd->add_option("--seed", run.seed, "Seed recorded with the run (default: $E2C_SEED or 0)");
    run_cmd->add_option("--event-log", run.event_log, "Also write the applied-event log to this file");

    GenArgs gen;
    auto* gen_cmd = app.add_subcommand("gen", "Generate a workload CSV");
    gen_cmd->add_option("--eet", gen.eet, "EET matrix CSV")->required();
    gen_cmd->add_option("--type", gen.types, "TYPE:exp:RATE | TYPE:const:PERIOD | TYPE:uniform:LO:HI");
    gen_cmd->add_option("--spec", gen.spec_file, "JSON generation spec");
    gen_cmd->add_option("--horizon", gen.horizon, "Generation horizon in seconds");
    gen_cmd->add_option("--beta", gen.beta, "Deadline slack factor (default 1.5)");
    gen_cmd->add_option("--seed", gen.seed, "PRNG seed (default: $E2C_SEED or 0)");
    gen_cmd->add_option("-o,--output", gen.output, "Output path (default stdout)");

    std::string host = "127.0.0.1";
    int port = 8080;
    int idle_minutes = 30;
    auto* serve_cmd = app.add_subcommand("serve", "Start the interactive control service");
    serve_cmd->add_option("--port", port, "TCP port, 0 for OS-assigned");
    serve_cmd->add_option("--host", host, "Listen address");
    serve_cmd->add_option("--idle-timeout", idle_minutes, "Minutes before idle sessions are evicted");

    auto* policies_cmd = app.add_subcommand("policies", "List registered scheduling policies");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*run_cmd) return do_run(run, out, err, registry);
        if (*gen_cmd) return do_gen(gen, out, err);
        if (*serve_cmd) return do_serve(host, port, idle_minutes, out, err, registry);
        if (*policies_cmd) {
            for (const auto& p : registry.list()) out << p->name << ' ' << to_string(p->mode) << '\n';
            return kOk;
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kInternal;
    }
    return kUsage;
}

} // namespace e2c::cli
