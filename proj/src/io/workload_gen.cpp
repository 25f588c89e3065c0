#include <e2c/io/workload_gen.hpp>

#include <e2c/core/errors.hpp>
#include <e2c/io/rng.hpp>

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace e2c::io {

double PortableRng::exponential(double rate) { return -std::log1p(-next_unit()) / rate; }

std::int64_t PortableRng::uniform_int(std::int64_t lo, std::int64_t hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    if (span == 0) return static_cast<std::int64_t>(next_u64());
    // Rejection sampling keeps the draw unbiased.
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % span;
    std::uint64_t x = 0;
    do {
        x = next_u64();
    } while (x >= limit);
    return lo + static_cast<std::int64_t>(x % span);
}

namespace {

std::vector<std::string> split_colon(const std::string& s) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        auto pos = s.find(':', start);
        out.push_back(s.substr(start, pos == std::string::npos ? std::string::npos : pos - start));
        if (pos == std::string::npos) return out;
        start = pos + 1;
    }
}

double positive_number(const std::string& s, const std::string& ctx) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw ParseError(ctx + ": invalid number '" + s + "'");
    }
    if (used != s.size() || !std::isfinite(v)) throw ParseError(ctx + ": invalid number '" + s + "'");
    return v;
}

Duration seconds_to_ticks(double s) {
    return Ticks{static_cast<std::int64_t>(std::llround(s * static_cast<double>(Ticks::kPerSecond)))};
}

void check_process(const TypeArrivals& t) {
    std::visit(
        [&](const auto& p) {
            using P = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<P, ConstantArrivals>) {
                if (p.period.count() <= 0) throw ConfigError(t.type_name + ": constant period must be positive");
            } else if constexpr (std::is_same_v<P, UniformArrivals>) {
                if (p.lo_s < 0.0 || p.lo_s > p.hi_s || p.hi_s <= 0.0) {
                    throw ConfigError(t.type_name + ": uniform bounds need 0 <= lo <= hi, hi > 0");
                }
            } else {
                if (!(p.rate_per_s > 0.0)) throw ConfigError(t.type_name + ": exponential rate must be positive");
            }
        },
        t.process);
}

} // namespace

TypeArrivals parse_type_arrivals(const std::string& text) {
    const auto parts = split_colon(text);
    if (parts.size() < 3 || parts[0].empty()) {
        throw ParseError("type spec '" + text + "': expected TYPE:exp:RATE, TYPE:const:PERIOD or TYPE:uniform:LO:HI");
    }
    const auto& kind = parts[1];
    if ((kind == "exp" || kind == "const") && parts.size() != 3) throw ParseError("type spec '" + text + "': extra fields");
    if (kind == "exp") return {parts[0], ExponentialArrivals{positive_number(parts[2], text)}};
    if (kind == "const") return {parts[0], ConstantArrivals{parse_seconds(parts[2])}};
    if (kind == "uniform") {
        if (parts.size() != 4) throw ParseError("type spec '" + text + "': uniform needs LO:HI");
        return {parts[0], UniformArrivals{positive_number(parts[2], text), positive_number(parts[3], text)}};
    }
    throw ParseError("type spec '" + text + "': unknown arrival process '" + kind + "'");
}

WorkloadGenSpec parse_gen_spec_json(const std::string& text) {
    WorkloadGenSpec spec;
    try {
        const auto j = nlohmann::json::parse(text);
        spec.horizon = seconds_to_ticks(j.at("horizon").get<double>());
        spec.beta = j.value("beta", 1.5);
        spec.seed = j.value("seed", std::uint64_t{0});
        for (const auto& t : j.at("types")) {
            TypeArrivals ta;
            ta.type_name = t.at("type").get<std::string>();
            const auto process = t.at("process").get<std::string>();
            if (process == "exp") {
                ta.process = ExponentialArrivals{t.at("rate").get<double>()};
            } else if (process == "const") {
                ta.process = ConstantArrivals{seconds_to_ticks(t.at("period").get<double>())};
            } else if (process == "uniform") {
                ta.process = UniformArrivals{t.at("lo").get<double>(), t.at("hi").get<double>()};
            } else {
                throw ParseError("unknown arrival process '" + process + "'");
            }
            spec.types.push_back(std::move(ta));
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("generation spec: ") + e.what());
    }
    return spec;
}

std::vector<Task> generate_workload(const WorkloadGenSpec& spec, const EetMatrix& eet) {
    if (spec.horizon.count() <= 0) throw ConfigError("horizon must be positive");
    if (!(spec.beta > 0.0)) throw ConfigError("beta must be positive");

    struct Draft {
        TimePoint arrival;
        std::size_t order;
        TaskTypeId type;
        TimePoint deadline;
    };
    std::vector<Draft> drafts;
    for (std::size_t i = 0; i < spec.types.size(); ++i) {
        const auto& ta = spec.types[i];
        const auto type = eet.find_type(ta.type_name);
        if (!type) throw ConfigError("task type " + ta.type_name + " is not defined in the EET");
        check_process(ta);
        const Duration slack = seconds_to_ticks(spec.beta * eet.mean_finite(*type) / Ticks::kPerSecond);

        // Each type draws from its own stream so editing one type leaves the others unchanged.
        PortableRng rng(splitmix64(spec.seed ^ splitmix64(i)));
        TimePoint t{0};
        while (true) {
            const Duration gap = std::visit(
                [&](const auto& p) -> Duration {
                    using P = std::decay_t<decltype(p)>;
                    if constexpr (std::is_same_v<P, ConstantArrivals>) {
                        return p.period;
                    } else if constexpr (std::is_same_v<P, UniformArrivals>) {
                        return seconds_to_ticks(rng.uniform(p.lo_s, p.hi_s));
                    } else {
                        return seconds_to_ticks(rng.exponential(p.rate_per_s));
                    }
                },
                ta.process);
            t += gap;
            if (t > spec.horizon) break;
            drafts.push_back({t, i, *type, t + slack});
        }
    }
    std::stable_sort(drafts.begin(), drafts.end(),
                     [](const Draft& a, const Draft& b) { return std::tie(a.arrival, a.order) < std::tie(b.arrival, b.order); });

    std::vector<Task> out;
    out.reserve(drafts.size());
    for (std::size_t i = 0; i < drafts.size(); ++i) {
        Task task;
        task.id = static_cast<TaskId>(i);
        task.type = drafts[i].type;
        task.arrival = drafts[i].arrival;
        task.deadline = drafts[i].deadline;
        out.push_back(task);
    }
    return out;
}

} // namespace e2c::io
