#include <e2c/service/http_server.hpp>

#include <e2c/core/errors.hpp>

#include <httplib.h>

namespace e2c::service {

using nlohmann::json;

namespace {

constexpr int kWorkerThreads = 32;
constexpr auto kStreamPoll = std::chrono::milliseconds(500);

void send_error(httplib::Response& res, int status, const std::string& message, const json& details = nullptr) {
    json body = {{"error", message}};
    if (details.is_object()) body.update(details);
    res.status = status;
    res.set_content(body.dump(), "application/json");
}

void send_json(httplib::Response& res, const json& body, int status = 200) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
}

// Uniform error mapping for every route.
template <typename Fn>
httplib::Server::Handler guarded(Fn fn) {
    return [fn](const httplib::Request& req, httplib::Response& res) {
        try {
            fn(req, res);
        } catch (const ServiceError& e) {
            send_error(res, e.status(), e.what(), e.details());
        } catch (const UsageError& e) {
            send_error(res, 400, e.what());
        } catch (const ParseError& e) {
            send_error(res, 422, e.what());
        } catch (const ConfigError& e) {
            send_error(res, 422, e.what());
        } catch (const json::exception& e) {
            send_error(res, 400, std::string("bad JSON: ") + e.what());
        } catch (const std::exception& e) {
            send_error(res, 500, e.what());
        }
    };
}

std::string form_field(const httplib::Request& req, const std::string& name, const std::string& fallback = {}) {
    if (req.has_file(name)) return req.get_file_value(name).content;
    if (req.has_param(name)) return req.get_param_value(name);
    return fallback;
}

std::string required_file(const httplib::Request& req, const std::string& name) {
    if (!req.has_file(name)) throw ServiceError(400, "missing multipart field '" + name + "'");
    return req.get_file_value(name).content;
}

SimConfig config_from_form(const httplib::Request& req, const sched::PolicyRegistry& registry) {
    SimConfig config;
    const auto policy_name = form_field(req, "policy", "mect");
    std::shared_ptr<const sched::Policy> policy;
    try {
        policy = registry.get(policy_name);
    } catch (const ConfigError& e) {
        throw ServiceError(422, e.what());
    }
    config.policy = policy->name;
    config.mode = policy->mode;
    config.machine_queue_capacity = parse_queue_size(form_field(req, "queue_size", "inf"));
    const auto seed = form_field(req, "seed", "0");
    try {
        config.seed = std::stoull(seed);
    } catch (const std::exception&) {
        throw ServiceError(400, "seed must be an unsigned integer");
    }
    return config;
}

} // namespace

HttpServer::HttpServer(SessionManager& sessions)
    : sessions_(sessions), server_(std::make_unique<httplib::Server>()) {
    server_->new_task_queue = [] { return new httplib::ThreadPool(kWorkerThreads); };
    // httplib defaults to SO_REUSEPORT, which would let a second server share
    // the port silently; keep only SO_REUSEADDR so "port in use" is detected.
    server_->set_socket_options([](socket_t sock) {
        int yes = 1;
        ::setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
    });
    install_routes();
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
    if (port == 0) return server_->bind_to_any_port(host);
    return server_->bind_to_port(host, port) ? port : -1;
}

bool HttpServer::listen() { return server_->listen_after_bind(); }

void HttpServer::stop() {
    sessions_.close_all();
    if (server_->is_running()) server_->stop();
}

bool HttpServer::running() const { return server_->is_running(); }

void HttpServer::install_routes() {
    auto& s = *server_;

    s.Get("/policies", guarded([this](const httplib::Request&, httplib::Response& res) {
              json out = json::array();
              for (const auto& p : sessions_.registry().list()) {
                  out.push_back({{"name", p->name}, {"mode", std::string(to_string(p->mode))}});
              }
              send_json(res, out);
          }));

    s.Post("/sessions", guarded([this](const httplib::Request& req, httplib::Response& res) {
               if (!req.is_multipart_form_data()) throw ServiceError(400, "expected multipart/form-data upload");
               const auto config = config_from_form(req, sessions_.registry());
               auto session = sessions_.create(required_file(req, "eet"), required_file(req, "machines"),
                                               required_file(req, "workload"), config);
               if (req.has_file("speed") || req.has_param("speed")) {
                   ControlCommand speed;
                   speed.kind = ControlCommand::Kind::SetSpeed;
                   try {
                       speed.speed = std::stod(form_field(req, "speed"));
                   } catch (const std::exception&) {
                       throw ServiceError(400, "speed must be a positive number");
                   }
                   if (!(speed.speed > 0.0)) throw ServiceError(400, "speed must be a positive number");
                   session->apply_control(speed);
               }
               send_json(res, {{"id", session->id()}, {"state", session->snapshot()}}, 201);
           }));

    s.Post(R"(/sessions/([^/]+)/control)", guarded([this](const httplib::Request& req, httplib::Response& res) {
               auto session = sessions_.get(req.matches[1]);
               const auto command = parse_control(json::parse(req.body));
               send_json(res, session->apply_control(command));
           }));

    s.Post(R"(/sessions/([^/]+)/scenario)", guarded([this](const httplib::Request& req, httplib::Response& res) {
               auto session = sessions_.get(req.matches[1]);
               auto scenario = load_scenario_or_422(required_file(req, "eet"), required_file(req, "machines"),
                                                    required_file(req, "workload"));
               send_json(res, session->replace_scenario(std::move(scenario)));
           }));

    s.Get(R"(/sessions/([^/]+)/state)", guarded([this](const httplib::Request& req, httplib::Response& res) {
              send_json(res, sessions_.get(req.matches[1])->snapshot());
          }));

    s.Get(R"(/sessions/([^/]+)/report)", guarded([this](const httplib::Request& req, httplib::Response& res) {
              auto session = sessions_.get(req.matches[1]);
              const auto kind = report::parse_report_kind(req.get_param_value("kind"));
              res.set_content(session->report(kind), "text/csv");
          }));

    s.Get(R"(/sessions/([^/]+)/log)", guarded([this](const httplib::Request& req, httplib::Response& res) {
              res.set_content(sessions_.get(req.matches[1])->event_log_text(), "text/plain");
          }));

    s.Get(R"(/sessions/([^/]+)/events)", guarded([this](const httplib::Request& req, httplib::Response& res) {
              auto session = sessions_.get(req.matches[1]);
              auto cursor = std::make_shared<StreamCursor>();
              res.set_header("Cache-Control", "no-cache");
              res.set_chunked_content_provider(
                  "text/event-stream", [session, cursor](std::size_t, httplib::DataSink& sink) {
                      auto chunk = session->next_stream_chunk(*cursor, kStreamPoll);
                      if (chunk.closed) {
                          sink.done();
                          return true;
                      }
                      // An idle comment line detects clients that went away.
                      if (chunk.text.empty()) chunk.text = ":\n\n";
                      return sink.write(chunk.text.data(), chunk.text.size());
                  });
          }));

    s.Delete(R"(/sessions/([^/]+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
                 if (!sessions_.erase(req.matches[1])) throw ServiceError(404, "unknown session");
                 res.status = 204;
             }));
}

} // namespace e2c::service
