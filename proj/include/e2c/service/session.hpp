#pragma once

#include <e2c/engine/simulation.hpp>
#include <e2c/report/report.hpp>
#include <e2c/sched/registry.hpp>

#include <nlohmann/json.hpp>

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>

namespace e2c::service {

/// Error with the HTTP status it maps to (404, 409, 400, 422).
class ServiceError : public std::runtime_error {
public:
    ServiceError(int status, const std::string& message, nlohmann::json details = nullptr)
        : std::runtime_error(message), status_(status), details_(std::move(details)) {}
    [[nodiscard]] int status() const { return status_; }
    [[nodiscard]] const nlohmann::json& details() const { return details_; }

private:
    int status_;
    nlohmann::json details_;
};

enum class SessionMode { Configuring, Running, Paused, Finished };

[[nodiscard]] std::string_view to_string(SessionMode m);

struct ControlCommand {
    enum class Kind { Play, Pause, Step, Reset, SetSpeed, SetPolicy, SetQueueSize };
    Kind kind = Kind::Step;
    double speed = 1.0;
    std::string policy;
    std::optional<std::size_t> queue_size;
};

/// Parses `{"command":"play|pause|step|reset|speed|policy|queue_size", ...}`.
/// Throws ServiceError(400) on malformed bodies.
ControlCommand parse_control(const nlohmann::json& body);

/// Result of waiting for stream progress.
struct StreamChunk {
    std::string text;
    bool closed = false;
};

/// Cursor of one event-stream subscriber.
struct StreamCursor {
    std::uint64_t epoch = 0;
    std::size_t next_seq = 0;
    bool joined = false;
};

/// One interactive simulation. Commands and engine steps are serialized
/// by a single mutex; while Running, a pacing thread applies events at
/// wall-clock time (simulated seconds / speed).
class Session {
public:
    Session(std::string id, std::shared_ptr<const Scenario> scenario, SimConfig config,
            const sched::PolicyRegistry& registry);
    ~Session();

    Session(const Session&) = delete;
    Session& operator=(const Session&) = delete;

    [[nodiscard]] const std::string& id() const { return id_; }

    [[nodiscard]] nlohmann::json snapshot() const;
    nlohmann::json apply_control(const ControlCommand& command);
    /// Replaces the loaded files; only before the first step.
    nlohmann::json replace_scenario(std::shared_ptr<const Scenario> scenario);

    /// Throws ServiceError(409) unless Finished.
    [[nodiscard]] std::string report(report::ReportKind kind) const;
    [[nodiscard]] std::string event_log_text() const;
    [[nodiscard]] SessionMode mode() const;

    /// Blocks up to `wait` for new events, then returns SSE text for
    /// everything the cursor has not seen. The first call yields a full
    /// snapshot; a reset yields a fresh snapshot and restarts the cursor.
    StreamChunk next_stream_chunk(StreamCursor& cursor, std::chrono::milliseconds wait);

    /// Wakes waiting streams and stops the pacing thread.
    void close();

    [[nodiscard]] std::chrono::steady_clock::time_point last_access() const;

private:
    void pacer_loop();
    void step_locked();
    void rebuild_locked();
    void touch_locked() const;
    [[nodiscard]] bool fresh_locked() const;
    [[nodiscard]] nlohmann::json snapshot_locked() const;
    [[nodiscard]] nlohmann::json delta_locked(const engine::StepResult& step) const;

    const std::string id_;
    const sched::PolicyRegistry& registry_;

    mutable std::mutex mu_;
    std::condition_variable cv_;
    std::shared_ptr<const Scenario> scenario_;
    SimConfig config_;
    std::unique_ptr<engine::Simulation> sim_;
    SessionMode mode_ = SessionMode::Configuring;
    double speed_ = 1.0;
    std::uint64_t epoch_ = 0;
    std::uint64_t control_version_ = 0;
    std::chrono::steady_clock::time_point anchor_wall_;
    TimePoint anchor_sim_;
    bool closed_ = false;
    mutable std::chrono::steady_clock::time_point last_access_;
    std::thread pacer_;
};

/// Owns sessions; evicts those idle longer than the timeout.
class SessionManager {
public:
    explicit SessionManager(const sched::PolicyRegistry& registry,
                            std::chrono::seconds idle_timeout = std::chrono::minutes(30));
    ~SessionManager();

    /// Throws ServiceError(422) with the validation report on bad input.
    std::shared_ptr<Session> create(const std::string& eet_csv, const std::string& machines_csv,
                                    const std::string& workload_csv, const SimConfig& config);
    /// Throws ServiceError(404).
    [[nodiscard]] std::shared_ptr<Session> get(const std::string& id) const;
    bool erase(const std::string& id);
    std::size_t evict_idle();
    void close_all();

    [[nodiscard]] const sched::PolicyRegistry& registry() const { return registry_; }

private:
    void janitor_loop();

    const sched::PolicyRegistry& registry_;
    const std::chrono::seconds idle_timeout_;
    mutable std::mutex mu_;
    std::condition_variable cv_;
    std::map<std::string, std::shared_ptr<Session>> sessions_;
    std::uint64_t next_id_ = 1;
    std::uint64_t id_salt_;
    bool stopping_ = false;
    std::thread janitor_;
};

/// Parses the three CSV texts into a scenario; ServiceError(422) on any
/// syntax error or incompatibility, with violations in the details.
std::shared_ptr<const Scenario> load_scenario_or_422(const std::string& eet_csv, const std::string& machines_csv,
                                                     const std::string& workload_csv);

/// Parses `inf` or a positive integer.
std::optional<std::size_t> parse_queue_size(const std::string& text);

} // namespace e2c::service
