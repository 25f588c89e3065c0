#include "fixtures.hpp"

#include <e2c/io/csv.hpp>
#include <e2c/report/report.hpp>
#include <e2c/service/http_server.hpp>

#include <gtest/gtest.h>
#include <httplib.h>

#include <thread>

namespace e2c::service {
namespace {

using json = nlohmann::json;
using namespace std::chrono_literals;

const std::string kEet = "task_type,M0\nT1,2\n";
const std::string kMachines = "machine,idle_power_w,busy_power_w\nM0,10,50\n";
const std::string kWorkload = "task_id,task_type,arrival_time,deadline\n0,T1,1,10\n";

const std::string kEet2 = "task_type,M0,M1\nT1,2,4\nT2,3,1\n";
const std::string kMachines2 = "machine,idle_power_w,busy_power_w\nM0,10,50\nM1,10,50\n";
const std::string kWorkload2 =
    "task_id,task_type,arrival_time,deadline\n0,T1,0,10\n1,T2,0,10\n2,T1,0.5,3\n3,T2,1,2\n4,T1,1,9\n";

SimConfig config(const std::string& policy, std::optional<std::size_t> capacity = std::nullopt) {
    const auto p = sched::default_registry().get(policy);
    return SimConfig{p->name, p->mode, capacity, 0};
}

ControlCommand cmd(ControlCommand::Kind kind) { return ControlCommand{kind, 1.0, {}, std::nullopt}; }

ControlCommand speed(double x) {
    auto c = cmd(ControlCommand::Kind::SetSpeed);
    c.speed = x;
    return c;
}

bool wait_finished(const Session& s, std::chrono::milliseconds limit = 10s) {
    const auto end = std::chrono::steady_clock::now() + limit;
    while (std::chrono::steady_clock::now() < end) {
        if (s.mode() == SessionMode::Finished) return true;
        std::this_thread::sleep_for(2ms);
    }
    return false;
}

int status_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const ServiceError& e) {
        return e.status();
    }
    return 0;
}

std::size_t count(const std::string& text, const std::string& needle) {
    std::size_t n = 0;
    for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
    return n;
}

class ServiceTest : public ::testing::Test {
protected:
    SessionManager manager{sched::default_registry()};
};

TEST_F(ServiceTest, CreateGivesPausedSessionAtClockZero) {
    auto s = manager.create(kEet, kMachines, kWorkload, config("mect"));
    const auto snap = s->snapshot();
    EXPECT_EQ(snap["mode"], "paused");
    EXPECT_EQ(snap["clock"], 0.0);
    EXPECT_TRUE(snap["batch_queue"].empty());
    EXPECT_EQ(snap["machines"][0]["waiting"].size(), 0u);
    EXPECT_TRUE(snap["machines"][0]["executing"].is_null());
    EXPECT_EQ(snap["queue_size"], "inf");
}

TEST_F(ServiceTest, IncompatibleFilesGive422WithOffendingTask) {
    try {
        (void)manager.create(kEet, kMachines, "task_id,task_type,arrival_time,deadline\n7,T4,1,10\n", config("mect"));
        FAIL() << "expected ServiceError";
    } catch (const ServiceError& e) {
        EXPECT_EQ(e.status(), 422);
        EXPECT_NE(std::string(e.what()).find("T4"), std::string::npos) << e.what();
    }
}

TEST_F(ServiceTest, SessionsAreIndependent) {
    auto a = manager.create(kEet, kMachines, kWorkload, config("mect"));
    auto b = manager.create(kEet, kMachines, kWorkload, config("mect"));
    EXPECT_NE(a->id(), b->id());
    a->apply_control(cmd(ControlCommand::Kind::Step));
    EXPECT_EQ(a->snapshot()["events_applied"], 1);
    EXPECT_EQ(b->snapshot()["events_applied"], 0);
    EXPECT_EQ(manager.get(a->id()), a);
    EXPECT_EQ(status_of([&] { (void)manager.get("nope"); }), 404);
}

TEST_F(ServiceTest, StepAppliesFirstEvent) {
    auto s = manager.create(kEet, kMachines, kWorkload, config("mect"));
    const auto snap = s->apply_control(cmd(ControlCommand::Kind::Step));
    EXPECT_EQ(snap["last_event"]["kind"], "arrival");
    EXPECT_EQ(snap["last_event"]["time"], 1.0);
    EXPECT_EQ(snap["clock"], 1.0);
    EXPECT_EQ(snap["batch_queue"].size(), 1u);
}

TEST_F(ServiceTest, ControlTransitions) {
    auto s = manager.create(kEet, kMachines, kWorkload, config("mect"));
    auto policy = cmd(ControlCommand::Kind::SetPolicy);
    policy.policy = "mm";
    EXPECT_EQ(s->apply_control(policy)["policy"], "mm");
    auto queue = cmd(ControlCommand::Kind::SetQueueSize);
    queue.queue_size = 2;
    EXPECT_EQ(s->apply_control(queue)["queue_size"], 2);

    s->apply_control(speed(0.001));
    EXPECT_EQ(s->apply_control(cmd(ControlCommand::Kind::Play))["mode"], "running");
    EXPECT_EQ(status_of([&] { s->apply_control(cmd(ControlCommand::Kind::Step)); }), 409);
    EXPECT_EQ(status_of([&] { s->apply_control(cmd(ControlCommand::Kind::Reset)); }), 409);
    EXPECT_EQ(s->apply_control(cmd(ControlCommand::Kind::Play))["mode"], "paused");

    s->apply_control(cmd(ControlCommand::Kind::Step));
    policy.policy = "mect";
    EXPECT_EQ(status_of([&] { s->apply_control(policy); }), 409);
    EXPECT_EQ(status_of([&] { s->apply_control(queue); }), 409);

    const auto reset = s->apply_control(cmd(ControlCommand::Kind::Reset));
    EXPECT_EQ(reset["clock"], 0.0);
    EXPECT_EQ(reset["events_applied"], 0);
    EXPECT_EQ(s->apply_control(policy)["queue_size"], "inf");
    queue.queue_size = 3;
    EXPECT_EQ(status_of([&] { s->apply_control(queue); }), 422);
}

TEST_F(ServiceTest, ReportOnlyWhenFinished) {
    auto s = manager.create(kEet, kMachines, kWorkload, config("mect"));
    try {
        (void)s->report(report::ReportKind::Summary);
        FAIL() << "expected ServiceError";
    } catch (const ServiceError& e) {
        EXPECT_EQ(e.status(), 409);
        EXPECT_EQ(std::string(e.what()), "simulation not finished");
    }
    for (int i = 0; i < 4; ++i) s->apply_control(cmd(ControlCommand::Kind::Step));
    EXPECT_EQ(s->mode(), SessionMode::Finished);
    EXPECT_EQ(status_of([&] { s->apply_control(cmd(ControlCommand::Kind::Step)); }), 409);
    EXPECT_EQ(status_of([&] { s->apply_control(cmd(ControlCommand::Kind::Play)); }), 409);

    const auto scenario = io::load_scenario_text(kEet, kMachines, kWorkload);
    const auto expected = testing::run_policy(scenario, "mect");
    for (auto kind : {report::ReportKind::Full, report::ReportKind::Task, report::ReportKind::Machine,
                      report::ReportKind::Summary}) {
        EXPECT_EQ(s->report(kind), report::render_report(expected, kind));
    }
    EXPECT_NE(s->report(report::ReportKind::Full).find("\n\nmachine,"), std::string::npos);
}

TEST_F(ServiceTest, SpeedDoesNotChangeResults) {
    std::string reference;
    for (double x : {100.0, 1000.0, 10.0}) {
        auto s = manager.create(kEet2, kMachines2, kWorkload2, config("mm", 1));
        s->apply_control(speed(x));
        s->apply_control(cmd(ControlCommand::Kind::Play));
        ASSERT_TRUE(wait_finished(*s));
        const auto text = s->report(report::ReportKind::Full) + s->event_log_text();
        if (reference.empty()) reference = text;
        EXPECT_EQ(text, reference) << "speed " << x;
    }
}

TEST_F(ServiceTest, InterleavedControlsDoNotChangeResults) {
    auto plain = manager.create(kEet2, kMachines2, kWorkload2, config("mmu", 2));
    while (plain->mode() != SessionMode::Finished) plain->apply_control(cmd(ControlCommand::Kind::Step));

    auto mixed = manager.create(kEet2, kMachines2, kWorkload2, config("mmu", 2));
    mixed->apply_control(cmd(ControlCommand::Kind::Step));
    mixed->apply_control(speed(50));
    mixed->apply_control(cmd(ControlCommand::Kind::Play));
    std::this_thread::sleep_for(5ms);
    if (mixed->mode() == SessionMode::Running) mixed->apply_control(cmd(ControlCommand::Kind::Pause));
    if (mixed->mode() == SessionMode::Paused) mixed->apply_control(cmd(ControlCommand::Kind::Step));
    if (mixed->mode() == SessionMode::Paused) {
        mixed->apply_control(speed(2000));
        mixed->apply_control(cmd(ControlCommand::Kind::Play));
    }
    ASSERT_TRUE(wait_finished(*mixed));
    EXPECT_EQ(mixed->event_log_text(), plain->event_log_text());
    EXPECT_EQ(mixed->report(report::ReportKind::Full), plain->report(report::ReportKind::Full));
}

TEST_F(ServiceTest, StreamDeliversEveryEventOnce) {
    auto s = manager.create(kEet, kMachines, kWorkload, config("mect"));
    StreamCursor cursor;
    const auto first = s->next_stream_chunk(cursor, 10ms);
    EXPECT_EQ(first.text.rfind("event: snapshot\n", 0), 0u);
    // Paused: silent.
    EXPECT_TRUE(s->next_stream_chunk(cursor, 20ms).text.empty());

    s->apply_control(speed(1000));
    s->apply_control(cmd(ControlCommand::Kind::Play));
    std::string all;
    const auto end = std::chrono::steady_clock::now() + 10s;
    while (count(all, "event: step\n") < 4 && std::chrono::steady_clock::now() < end) {
        all += s->next_stream_chunk(cursor, 50ms).text;
    }
    ASSERT_TRUE(wait_finished(*s));
    all += s->next_stream_chunk(cursor, 20ms).text;
    EXPECT_EQ(count(all, "event: step\n"), 4u);
    const auto a = all.find("\"kind\":\"arrival\"");
    const auto w = all.find("\"kind\":\"wake\"");
    const auto c = all.find("\"kind\":\"completion\"");
    const auto d = all.find("\"kind\":\"deadline\"");
    ASSERT_NE(d, std::string::npos) << all;
    EXPECT_LT(a, w);
    EXPECT_LT(w, c);
    EXPECT_LT(c, d);
}

TEST_F(ServiceTest, LateJoinGetsSnapshotThenDeltas) {
    auto s = manager.create(kEet, kMachines, kWorkload, config("mect"));
    s->apply_control(cmd(ControlCommand::Kind::Step));
    s->apply_control(cmd(ControlCommand::Kind::Step));
    StreamCursor cursor;
    const auto join = s->next_stream_chunk(cursor, 10ms);
    ASSERT_EQ(join.text.rfind("event: snapshot\n", 0), 0u);
    EXPECT_NE(join.text.find("\"events_applied\":2"), std::string::npos);
    s->apply_control(cmd(ControlCommand::Kind::Step));
    const auto next = s->next_stream_chunk(cursor, 100ms);
    EXPECT_EQ(count(next.text, "event: step\n"), 1u);
    EXPECT_NE(next.text.find("\"seq\":2"), std::string::npos);

    s->apply_control(cmd(ControlCommand::Kind::Reset));
    EXPECT_EQ(s->next_stream_chunk(cursor, 100ms).text.rfind("event: reset\n", 0), 0u);
}

TEST_F(ServiceTest, ReplaceScenarioOnlyWhenFresh) {
    auto s = manager.create(kEet, kMachines, kWorkload, config("mect"));
    const auto snap =
        s->replace_scenario(std::make_shared<const Scenario>(io::load_scenario_text(kEet2, kMachines2, kWorkload2)));
    EXPECT_EQ(snap["machines"].size(), 2u);
    s->apply_control(cmd(ControlCommand::Kind::Step));
    EXPECT_EQ(status_of([&] {
                  s->replace_scenario(std::make_shared<const Scenario>(io::load_scenario_text(kEet, kMachines, kWorkload)));
              }),
              409);
}

TEST_F(ServiceTest, EvictsIdleSessions) {
    SessionManager short_lived(sched::default_registry(), std::chrono::seconds(0));
    auto s = short_lived.create(kEet, kMachines, kWorkload, config("mect"));
    const auto id = s->id();
    s.reset();
    std::this_thread::sleep_for(5ms);
    EXPECT_EQ(short_lived.evict_idle(), 1u);
    EXPECT_EQ(status_of([&] { (void)short_lived.get(id); }), 404);
}

TEST(ServiceParsing, ControlBodies) {
    EXPECT_EQ(parse_control(json{{"command", "increment"}}).kind, ControlCommand::Kind::Step);
    EXPECT_EQ(parse_control(json{{"command", "speed"}, {"speed", 4}}).speed, 4.0);
    EXPECT_EQ(parse_control(json{{"command", "queue_size"}, {"queue_size", "inf"}}).queue_size, std::nullopt);
    EXPECT_EQ(parse_control(json{{"command", "queue_size"}, {"queue_size", 3}}).queue_size, 3u);
    EXPECT_EQ(status_of([] { (void)parse_control(json{{"command", "fly"}}); }), 400);
    EXPECT_EQ(status_of([] { (void)parse_control(json{{"command", "speed"}, {"speed", -1}}); }), 400);
    EXPECT_EQ(status_of([] { (void)parse_control(json::array()); }), 400);
}

class HttpTest : public ::testing::Test {
protected:
    void SetUp() override {
        port = server.bind("127.0.0.1", 0);
        ASSERT_GT(port, 0);
        thread = std::thread([this] { server.listen(); });
        for (int i = 0; i < 200 && !server.running(); ++i) std::this_thread::sleep_for(5ms);
    }
    void TearDown() override {
        server.stop();
        if (thread.joinable()) thread.join();
    }

    std::string create(const std::string& policy, const std::string& queue = "") {
        httplib::MultipartFormDataItems items{{"eet", kEet, "eet.csv", "text/csv"},
                                              {"machines", kMachines, "machines.csv", "text/csv"},
                                              {"workload", kWorkload, "workload.csv", "text/csv"},
                                              {"policy", policy, "", ""}};
        if (!queue.empty()) items.push_back({"queue_size", queue, "", ""});
        auto res = client().Post("/sessions", items);
        EXPECT_TRUE(res);
        EXPECT_EQ(res->status, 201) << res->body;
        return json::parse(res->body)["id"].get<std::string>();
    }

    httplib::Client client() {
        httplib::Client c("127.0.0.1", port);
        c.set_read_timeout(10, 0);
        return c;
    }

    SessionManager manager{sched::default_registry()};
    HttpServer server{manager};
    int port = 0;
    std::thread thread;
};

TEST_F(HttpTest, FullJourney) {
    auto c = client();
    auto policies = c.Get("/policies");
    ASSERT_TRUE(policies);
    EXPECT_EQ(policies->status, 200);
    EXPECT_NE(policies->body.find("\"mmu\""), std::string::npos);

    const auto id = create("mect");
    auto state = c.Get("/sessions/" + id + "/state");
    ASSERT_TRUE(state);
    EXPECT_EQ(json::parse(state->body)["clock"], 0.0);

    auto early = c.Get("/sessions/" + id + "/report?kind=summary");
    ASSERT_TRUE(early);
    EXPECT_EQ(early->status, 409);

    auto step = c.Post("/sessions/" + id + "/control", R"({"command":"step"})", "application/json");
    ASSERT_TRUE(step);
    EXPECT_EQ(json::parse(step->body)["last_event"]["kind"], "arrival");

    auto bad = c.Post("/sessions/" + id + "/control", R"({"command":"policy","policy":"mm"})", "application/json");
    ASSERT_TRUE(bad);
    EXPECT_EQ(bad->status, 409);
    auto garbage = c.Post("/sessions/" + id + "/control", "{", "application/json");
    ASSERT_TRUE(garbage);
    EXPECT_EQ(garbage->status, 400);

    c.Post("/sessions/" + id + "/control", R"({"command":"speed","speed":1000})", "application/json");
    c.Post("/sessions/" + id + "/control", R"({"command":"play"})", "application/json");
    std::string mode;
    for (int i = 0; i < 500 && mode != "finished"; ++i) {
        std::this_thread::sleep_for(5ms);
        mode = json::parse(c.Get("/sessions/" + id + "/state")->body)["mode"].get<std::string>();
    }
    ASSERT_EQ(mode, "finished");

    const auto expected = testing::run_policy(io::load_scenario_text(kEet, kMachines, kWorkload), "mect");
    for (const char* kind : {"full", "task", "machine", "summary"}) {
        auto r = c.Get(std::string("/sessions/") + id + "/report?kind=" + kind);
        ASSERT_TRUE(r);
        EXPECT_EQ(r->status, 200);
        EXPECT_EQ(r->body, report::render_report(expected, report::parse_report_kind(kind)));
    }
    auto log = c.Get("/sessions/" + id + "/log");
    ASSERT_TRUE(log);
    EXPECT_EQ(log->body, engine::format_event_log(expected.event_log));
    auto unknown_kind = c.Get("/sessions/" + id + "/report?kind=pdf");
    ASSERT_TRUE(unknown_kind);
    EXPECT_EQ(unknown_kind->status, 400);

    auto del = c.Delete("/sessions/" + id);
    ASSERT_TRUE(del);
    EXPECT_EQ(del->status, 204);
    auto gone = c.Get("/sessions/" + id + "/state");
    ASSERT_TRUE(gone);
    EXPECT_EQ(gone->status, 404);
}

TEST_F(HttpTest, ValidationErrorsAre422) {
    httplib::MultipartFormDataItems items{{"eet", kEet, "eet.csv", "text/csv"},
                                          {"machines", kMachines, "machines.csv", "text/csv"},
                                          {"workload", "task_id,task_type,arrival_time,deadline\n7,T4,1,10\n",
                                           "workload.csv", "text/csv"}};
    auto res = client().Post("/sessions", items);
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 422);
    EXPECT_NE(res->body.find("T4"), std::string::npos);
}

TEST_F(HttpTest, FcfsWithFiniteQueueRejected) {
    httplib::MultipartFormDataItems items{{"eet", kEet, "eet.csv", "text/csv"},
                                          {"machines", kMachines, "machines.csv", "text/csv"},
                                          {"workload", kWorkload, "workload.csv", "text/csv"},
                                          {"policy", "fcfs", "", ""},
                                          {"queue_size", "2", "", ""}};
    auto res = client().Post("/sessions", items);
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 422);
    EXPECT_EQ(create("mm", "2").empty(), false);
}

TEST_F(HttpTest, EventStream) {
    const auto id = create("mect");
    auto c = client();
    c.Post("/sessions/" + id + "/control", R"({"command":"speed","speed":500})", "application/json");

    std::string received;
    std::thread player([&] {
        std::this_thread::sleep_for(50ms);
        client().Post("/sessions/" + id + "/control", R"({"command":"play"})", "application/json");
    });
    auto res = client().Get("/sessions/" + id + "/events", [&](const char* data, std::size_t n) {
        received.append(data, n);
        return count(received, "event: step\n") < 4;
    });
    player.join();
    EXPECT_EQ(received.rfind("event: snapshot\n", 0), 0u);
    EXPECT_EQ(count(received, "event: step\n"), 4u);

    auto missing = client().Get("/sessions/nope/events");
    ASSERT_TRUE(missing);
    EXPECT_EQ(missing->status, 404);
}

TEST(HttpBind, SecondServerOnSamePortFails) {
    SessionManager manager(sched::default_registry());
    HttpServer a(manager), b(manager);
    const int port = a.bind("127.0.0.1", 0);
    ASSERT_GT(port, 0);
    EXPECT_EQ(b.bind("127.0.0.1", port), -1);
}

} // namespace
} // namespace e2c::service
