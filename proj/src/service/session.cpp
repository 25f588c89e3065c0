#include <e2c/service/session.hpp>

#include <e2c/io/csv.hpp>

#include <cmath>
#include <random>

namespace e2c::service {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

namespace {

json event_json(const engine::SimEvent& e) {
    return {{"time", e.time.seconds()}, {"kind", std::string(engine::to_string(e.kind))}, {"entity", e.entity}};
}

json machine_json(const engine::Simulation& sim, MachineIndex m) {
    const auto& ms = sim.machines()[m];
    json waiting = json::array();
    for (auto id : ms.waiting) waiting.push_back(id);
    json executing = nullptr;
    if (ms.executing) {
        const auto& ex = *ms.executing;
        const double total = static_cast<double>((ex.will_finish - ex.started).count());
        const double done = static_cast<double>((sim.clock() - ex.started).count());
        executing = {{"task", ex.task},
                     {"start", ex.started.seconds()},
                     {"will_finish", ex.will_finish.seconds()},
                     {"progress", total > 0 ? done / total : 0.0}};
    }
    return {{"index", m},
            {"name", ms.spec.name},
            {"waiting", waiting},
            {"executing", executing},
            {"ready_time", sim.ready_time(m).seconds()}};
}

json counters_json(const engine::Simulation& sim) {
    std::size_t by_status[7] = {};
    for (const auto& t : sim.tasks()) ++by_status[static_cast<int>(t.status)];
    const auto& c = sim.counters();
    return {{"total", c.total},
            {"pending", by_status[static_cast<int>(TaskStatus::Pending)]},
            {"batched", by_status[static_cast<int>(TaskStatus::Batched)]},
            {"queued", by_status[static_cast<int>(TaskStatus::Queued)]},
            {"executing", by_status[static_cast<int>(TaskStatus::Executing)]},
            {"completed", c.completed},
            {"canceled", c.canceled},
            {"missed", c.missed}};
}

json batch_json(const engine::Simulation& sim) {
    json out = json::array();
    for (const auto& b : sim.batch_queue()) out.push_back(b.id);
    return out;
}

std::string sse(std::string_view event, const json& data) {
    std::string out = "event: ";
    out += event;
    out += "\ndata: ";
    out += data.dump();
    out += "\n\n";
    return out;
}

} // namespace

std::string_view to_string(SessionMode m) {
    switch (m) {
    case SessionMode::Configuring: return "configuring";
    case SessionMode::Running: return "running";
    case SessionMode::Paused: return "paused";
    case SessionMode::Finished: return "finished";
    }
    return "?";
}

std::optional<std::size_t> parse_queue_size(const std::string& text) {
    if (text == "inf") return std::nullopt;
    std::size_t used = 0;
    long long v = 0;
    try {
        v = std::stoll(text, &used);
    } catch (const std::exception&) {
        throw ServiceError(400, "queue_size must be a positive integer or inf");
    }
    if (used != text.size() || v <= 0) throw ServiceError(400, "queue_size must be a positive integer or inf");
    return static_cast<std::size_t>(v);
}

ControlCommand parse_control(const json& body) {
    if (!body.is_object() || !body.contains("command") || !body["command"].is_string()) {
        throw ServiceError(400, "body must be an object with a string \"command\"");
    }
    const auto name = body["command"].get<std::string>();
    ControlCommand c;
    using K = ControlCommand::Kind;
    if (name == "play") {
        c.kind = K::Play;
    } else if (name == "pause") {
        c.kind = K::Pause;
    } else if (name == "step" || name == "increment") {
        c.kind = K::Step;
    } else if (name == "reset") {
        c.kind = K::Reset;
    } else if (name == "speed" || name == "set_speed") {
        c.kind = K::SetSpeed;
        if (!body.contains("speed") || !body["speed"].is_number()) throw ServiceError(400, "speed needs a number");
        c.speed = body["speed"].get<double>();
        if (!(c.speed > 0.0) || !std::isfinite(c.speed)) throw ServiceError(400, "speed must be positive");
    } else if (name == "policy" || name == "set_policy") {
        c.kind = K::SetPolicy;
        if (!body.contains("policy") || !body["policy"].is_string()) throw ServiceError(400, "policy needs a name");
        c.policy = body["policy"].get<std::string>();
    } else if (name == "queue_size" || name == "set_queue_size") {
        c.kind = K::SetQueueSize;
        if (!body.contains("queue_size")) throw ServiceError(400, "queue_size missing");
        const auto& q = body["queue_size"];
        if (q.is_string()) {
            c.queue_size = parse_queue_size(q.get<std::string>());
        } else if (q.is_number_integer() && q.get<long long>() > 0) {
            c.queue_size = q.get<std::size_t>();
        } else {
            throw ServiceError(400, "queue_size must be a positive integer or \"inf\"");
        }
    } else {
        throw ServiceError(400, "unknown command '" + name + "'");
    }
    return c;
}

std::shared_ptr<const Scenario> load_scenario_or_422(const std::string& eet_csv, const std::string& machines_csv,
                                                     const std::string& workload_csv) {
    ValidationReport report;
    try {
        return std::make_shared<const Scenario>(io::load_scenario_text(eet_csv, machines_csv, workload_csv, &report));
    } catch (const std::exception& e) {
        json violations = json::array();
        for (const auto& v : report.violations) violations.push_back({{"entity", v.entity}, {"message", v.message}});
        throw ServiceError(422, e.what(), {{"violations", violations}});
    }
}

Session::Session(std::string id, std::shared_ptr<const Scenario> scenario, SimConfig config,
                 const sched::PolicyRegistry& registry)
    : id_(std::move(id)), registry_(registry), scenario_(std::move(scenario)), config_(std::move(config)) {
    std::lock_guard lock(mu_);
    rebuild_locked();
    touch_locked();
    pacer_ = std::thread([this] { pacer_loop(); });
}

Session::~Session() {
    close();
    if (pacer_.joinable()) pacer_.join();
}

void Session::close() {
    {
        std::lock_guard lock(mu_);
        closed_ = true;
    }
    cv_.notify_all();
}

void Session::touch_locked() const { last_access_ = Clock::now(); }

Clock::time_point Session::last_access() const {
    std::lock_guard lock(mu_);
    return last_access_;
}

SessionMode Session::mode() const {
    std::lock_guard lock(mu_);
    return mode_;
}

void Session::rebuild_locked() {
    try {
        sim_ = std::make_unique<engine::Simulation>(scenario_, config_, registry_.get(config_.policy));
    } catch (const engine::ScenarioError& e) {
        json violations = json::array();
        for (const auto& v : e.report().violations) violations.push_back({{"entity", v.entity}, {"message", v.message}});
        throw ServiceError(422, e.what(), {{"violations", violations}});
    } catch (const ConfigError& e) {
        throw ServiceError(422, e.what());
    }
    config_ = sim_->config();
    mode_ = sim_->finished() ? SessionMode::Finished : SessionMode::Paused;
    ++epoch_;
}

bool Session::fresh_locked() const { return sim_->event_log().empty(); }

json Session::snapshot_locked() const {
    json machines = json::array();
    for (MachineIndex m = 0; m < sim_->machines().size(); ++m) machines.push_back(machine_json(*sim_, m));
    json last = nullptr;
    if (!sim_->event_log().empty()) {
        const auto& r = sim_->event_log().back();
        last = event_json(r.event);
        last["seq"] = r.seq;
    }
    return {{"id", id_},
            {"mode", std::string(to_string(mode_))},
            {"speed", speed_},
            {"policy", config_.policy},
            {"scheduling_mode", std::string(to_string(config_.mode))},
            {"queue_size", config_.machine_queue_capacity ? json(*config_.machine_queue_capacity) : json("inf")},
            {"clock", sim_->clock().seconds()},
            {"events_applied", sim_->event_log().size()},
            {"counters", counters_json(*sim_)},
            {"batch_queue", batch_json(*sim_)},
            {"machines", machines},
            {"last_event", last}};
}

json Session::delta_locked(const engine::StepResult& step) const {
    json changes = json::array();
    std::vector<bool> touched(sim_->machines().size(), false);
    for (const auto& c : step.changes) {
        changes.push_back({{"task", c.task},
                           {"from", std::string(to_string(c.from))},
                           {"to", std::string(to_string(c.to))},
                           {"machine", c.machine ? json(*c.machine) : json(nullptr)}});
        if (c.machine) touched[*c.machine] = true;
    }
    if (step.event.kind == engine::EventKind::Completion) touched.at(static_cast<std::size_t>(step.event.entity)) = true;
    json machines = json::array();
    for (MachineIndex m = 0; m < touched.size(); ++m) {
        if (touched[m]) machines.push_back(machine_json(*sim_, m));
    }
    return {{"seq", step.seq},
            {"event", event_json(step.event)},
            {"changes", changes},
            {"clock", sim_->clock().seconds()},
            {"mode", std::string(to_string(mode_))},
            {"counters", counters_json(*sim_)},
            {"batch_queue", batch_json(*sim_)},
            {"machines", machines}};
}

json Session::snapshot() const {
    std::lock_guard lock(mu_);
    touch_locked();
    return snapshot_locked();
}

void Session::step_locked() {
    sim_->step();
    if (sim_->finished()) mode_ = SessionMode::Finished;
    cv_.notify_all();
}

json Session::apply_control(const ControlCommand& command) {
    using K = ControlCommand::Kind;
    std::unique_lock lock(mu_);
    touch_locked();
    auto conflict = [&](const std::string& what) {
        throw ServiceError(409, what + " not allowed while " + std::string(to_string(mode_)));
    };
    switch (command.kind) {
    case K::Play:
        if (mode_ == SessionMode::Running) {
            mode_ = SessionMode::Paused;
        } else if (mode_ == SessionMode::Paused) {
            mode_ = SessionMode::Running;
            anchor_wall_ = Clock::now();
            anchor_sim_ = sim_->clock();
        } else {
            conflict("play");
        }
        break;
    case K::Pause:
        if (mode_ == SessionMode::Running) {
            mode_ = SessionMode::Paused;
        } else if (mode_ != SessionMode::Paused) {
            conflict("pause");
        }
        break;
    case K::Step:
        if (mode_ != SessionMode::Paused) conflict("step");
        step_locked();
        break;
    case K::Reset:
        if (mode_ == SessionMode::Running) conflict("reset");
        rebuild_locked();
        break;
    case K::SetSpeed:
        speed_ = command.speed;
        anchor_wall_ = Clock::now();
        anchor_sim_ = sim_->clock();
        break;
    case K::SetPolicy: {
        if (mode_ == SessionMode::Running || !fresh_locked()) conflict("changing the policy after the first step is");
        const auto policy = [&] {
            try {
                return registry_.get(command.policy);
            } catch (const ConfigError& e) {
                throw ServiceError(422, e.what());
            }
        }();
        const auto previous = config_;
        config_.policy = policy->name;
        config_.mode = policy->mode;
        if (policy->mode == SchedulingMode::Immediate) config_.machine_queue_capacity.reset();
        try {
            rebuild_locked();
        } catch (...) {
            config_ = previous;
            rebuild_locked();
            throw;
        }
        break;
    }
    case K::SetQueueSize: {
        if (mode_ == SessionMode::Running || !fresh_locked()) conflict("changing the queue size after the first step is");
        if (config_.mode == SchedulingMode::Immediate && command.queue_size) {
            throw ServiceError(422, "immediate policies require an unbounded machine queue (inf)");
        }
        config_.machine_queue_capacity = command.queue_size;
        rebuild_locked();
        break;
    }
    }
    ++control_version_;
    cv_.notify_all();
    return snapshot_locked();
}

json Session::replace_scenario(std::shared_ptr<const Scenario> scenario) {
    std::unique_lock lock(mu_);
    touch_locked();
    if (mode_ == SessionMode::Running || !fresh_locked()) {
        throw ServiceError(409, "scenario can only be replaced before the first step (reset first)");
    }
    auto previous = scenario_;
    scenario_ = std::move(scenario);
    try {
        rebuild_locked();
    } catch (...) {
        scenario_ = previous;
        rebuild_locked();
        throw;
    }
    ++control_version_;
    cv_.notify_all();
    return snapshot_locked();
}

std::string Session::report(report::ReportKind kind) const {
    std::lock_guard lock(mu_);
    touch_locked();
    if (mode_ != SessionMode::Finished) throw ServiceError(409, "simulation not finished");
    return report::render_report(sim_->outcome(), kind);
}

std::string Session::event_log_text() const {
    std::lock_guard lock(mu_);
    touch_locked();
    return engine::format_event_log(sim_->event_log());
}

void Session::pacer_loop() {
    std::unique_lock lock(mu_);
    while (!closed_) {
        if (mode_ != SessionMode::Running) {
            cv_.wait(lock, [&] { return closed_ || mode_ == SessionMode::Running; });
            continue;
        }
        const auto next = sim_->next_event();
        if (!next) {
            mode_ = SessionMode::Finished;
            cv_.notify_all();
            continue;
        }
        const double sim_seconds = (next->time - anchor_sim_).seconds();
        const auto due = anchor_wall_ + std::chrono::duration_cast<Clock::duration>(
                                            std::chrono::duration<double>(sim_seconds / speed_));
        const auto version = control_version_;
        const bool interrupted = cv_.wait_until(lock, due, [&] { return closed_ || control_version_ != version; });
        if (interrupted) continue;
        if (mode_ == SessionMode::Running) step_locked();
    }
}

StreamChunk Session::next_stream_chunk(StreamCursor& cursor, std::chrono::milliseconds wait) {
    std::unique_lock lock(mu_);
    StreamChunk chunk;
    if (!cursor.joined || cursor.epoch != epoch_) {
        const bool was_joined = cursor.joined;
        cursor.joined = true;
        cursor.epoch = epoch_;
        cursor.next_seq = sim_->event_log().size();
        chunk.text = sse(was_joined ? "reset" : "snapshot", snapshot_locked());
        return chunk;
    }
    cv_.wait_for(lock, wait, [&] {
        return closed_ || cursor.epoch != epoch_ || sim_->event_log().size() > cursor.next_seq;
    });
    if (closed_) {
        chunk.closed = true;
        return chunk;
    }
    if (cursor.epoch != epoch_) return chunk; // reset is delivered on the next call
    const auto& log = sim_->event_log();
    for (; cursor.next_seq < log.size(); ++cursor.next_seq) {
        // Deltas carry the state after the latest applied event.
        chunk.text += sse("step", delta_locked(log[cursor.next_seq]));
    }
    return chunk;
}

SessionManager::SessionManager(const sched::PolicyRegistry& registry, std::chrono::seconds idle_timeout)
    : registry_(registry), idle_timeout_(idle_timeout), id_salt_(std::random_device{}()) {
    janitor_ = std::thread([this] { janitor_loop(); });
}

SessionManager::~SessionManager() {
    {
        std::lock_guard lock(mu_);
        stopping_ = true;
    }
    cv_.notify_all();
    if (janitor_.joinable()) janitor_.join();
    close_all();
}

std::shared_ptr<Session> SessionManager::create(const std::string& eet_csv, const std::string& machines_csv,
                                                const std::string& workload_csv, const SimConfig& config) {
    auto scenario = load_scenario_or_422(eet_csv, machines_csv, workload_csv);
    std::string id;
    {
        std::lock_guard lock(mu_);
        char buf[32];
        std::snprintf(buf, sizeof buf, "s%llx%04llx", static_cast<unsigned long long>(id_salt_ & 0xffffff),
                      static_cast<unsigned long long>(next_id_++));
        id = buf;
    }
    auto session = std::make_shared<Session>(id, std::move(scenario), config, registry_);
    std::lock_guard lock(mu_);
    sessions_.emplace(id, session);
    return session;
}

std::shared_ptr<Session> SessionManager::get(const std::string& id) const {
    std::lock_guard lock(mu_);
    auto it = sessions_.find(id);
    if (it == sessions_.end()) throw ServiceError(404, "unknown session " + id);
    return it->second;
}

bool SessionManager::erase(const std::string& id) {
    std::shared_ptr<Session> victim;
    {
        std::lock_guard lock(mu_);
        auto it = sessions_.find(id);
        if (it == sessions_.end()) return false;
        victim = std::move(it->second);
        sessions_.erase(it);
    }
    victim->close();
    return true;
}

std::size_t SessionManager::evict_idle() {
    std::vector<std::shared_ptr<Session>> victims;
    {
        std::lock_guard lock(mu_);
        const auto now = Clock::now();
        for (auto it = sessions_.begin(); it != sessions_.end();) {
            if (now - it->second->last_access() > idle_timeout_) {
                victims.push_back(std::move(it->second));
                it = sessions_.erase(it);
            } else {
                ++it;
            }
        }
    }
    for (auto& v : victims) v->close();
    return victims.size();
}

void SessionManager::close_all() {
    std::map<std::string, std::shared_ptr<Session>> all;
    {
        std::lock_guard lock(mu_);
        all.swap(sessions_);
    }
    for (auto& [_, s] : all) s->close();
}

void SessionManager::janitor_loop() {
    std::unique_lock lock(mu_);
    while (!stopping_) {
        cv_.wait_for(lock, std::chrono::seconds(30), [&] { return stopping_; });
        if (stopping_) break;
        lock.unlock();
        evict_idle();
        lock.lock();
    }
}

} // namespace e2c::service
