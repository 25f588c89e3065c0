#pragma once

#include <e2c/service/session.hpp>

#include <memory>
#include <string>

namespace httplib {
class Server;
}

namespace e2c::service {

/// HTTP + JSON front of a SessionManager.
///
///   POST   /sessions                     multipart: eet, machines, workload, policy, queue_size, seed, speed
///   POST   /sessions/{id}/control        {"command": "...", ...}
///   POST   /sessions/{id}/scenario       multipart replacement before the first step
///   GET    /sessions/{id}/state
///   GET    /sessions/{id}/report?kind=   text/csv
///   GET    /sessions/{id}/log            text/plain event log
///   GET    /sessions/{id}/events         text/event-stream
///   DELETE /sessions/{id}
///   GET    /policies
class HttpServer {
public:
    explicit HttpServer(SessionManager& sessions);
    ~HttpServer();

    /// Returns the bound port (OS-assigned for 0) or -1 when binding fails.
    int bind(const std::string& host, int port);
    /// Blocks until stop().
    bool listen();
    void stop();
    [[nodiscard]] bool running() const;

private:
    void install_routes();

    SessionManager& sessions_;
    std::unique_ptr<httplib::Server> server_;
};

} // namespace e2c::service
