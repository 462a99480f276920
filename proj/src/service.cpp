#include "convbrowse/service.hpp"

#include <httplib.h>

#include <random>

#include "convbrowse/log.hpp"
#include "convbrowse/text.hpp"

namespace convbrowse {

namespace {

std::string random_id() {
  static std::mutex mutex;
  static std::mt19937_64 rng{std::random_device{}()};
  std::lock_guard lock(mutex);
  return hex64(rng());
}

}  // namespace

SessionService::SessionService(std::shared_ptr<Browser> browser, std::chrono::milliseconds idle_timeout,
                               SteadyClock clock)
    : browser_(std::move(browser)), idle_timeout_(idle_timeout), clock_(std::move(clock)) {
  if (!browser_) throw std::invalid_argument("session service needs a browser");
}

std::string SessionService::create(const std::string& seed) {
  expire_idle();
  std::string id = random_id();
  std::unique_ptr<Session> session;
  try {
    session = open_session(browser_, seed, id);
  } catch (const SessionError& e) {
    throw ServiceError(422, "cannot_open_site", e.what());
  }
  auto entry = std::make_shared<Entry>();
  entry->session = std::move(session);
  entry->last_used = clock_();
  std::lock_guard lock(mutex_);
  sessions_[id] = std::move(entry);
  return id;
}

std::shared_ptr<SessionService::Entry> SessionService::find(const std::string& session_id) {
  std::lock_guard lock(mutex_);
  auto it = sessions_.find(session_id);
  if (it == sessions_.end()) throw ServiceError(404, "session_not_found", "no session '" + session_id + "'");
  {
    std::lock_guard entry_lock(it->second->mutex);
    const bool busy = it->second->serving != it->second->next_ticket;
    if (!busy && clock_() - it->second->last_used > idle_timeout_) {
      sessions_.erase(it);
      throw ServiceError(404, "session_not_found", "session '" + session_id + "' expired");
    }
  }
  return it->second;
}

template <typename Fn>
auto SessionService::in_order(const std::string& session_id, Fn fn) {
  auto entry = find(session_id);
  std::unique_lock lock(entry->mutex);
  const std::uint64_t ticket = entry->next_ticket++;
  entry->turn.wait(lock, [&] { return entry->serving == ticket; });
  lock.unlock();
  struct Release {
    Entry& e;
    SteadyClock& clock;
    ~Release() {
      std::lock_guard l(e.mutex);
      e.last_used = clock();
      ++e.serving;
      e.turn.notify_all();
    }
  } release{*entry, clock_};
  return fn(*entry->session);
}

Response SessionService::utter(const std::string& session_id, const std::string& utterance) {
  return in_order(session_id, [&](Session& s) { return s.handle(utterance); });
}

Json SessionService::summary(const std::string& session_id) {
  return in_order(session_id, [&](Session& s) { return session_summary(s); });
}

bool SessionService::remove(const std::string& session_id) {
  std::lock_guard lock(mutex_);
  return sessions_.erase(session_id) > 0;
}

std::size_t SessionService::expire_idle() {
  std::lock_guard lock(mutex_);
  const auto now = clock_();
  std::size_t removed = 0;
  for (auto it = sessions_.begin(); it != sessions_.end();) {
    bool idle = false;
    {
      std::lock_guard entry_lock(it->second->mutex);
      idle = it->second->serving == it->second->next_ticket && now - it->second->last_used > idle_timeout_;
    }
    if (idle) {
      it = sessions_.erase(it);
      ++removed;
    } else {
      ++it;
    }
  }
  return removed;
}

std::size_t SessionService::size() const {
  std::lock_guard lock(mutex_);
  return sessions_.size();
}

// ---------------------------------------------------------------------------

namespace {

void send_json(httplib::Response& res, int status, const Json& body) {
  res.status = status;
  res.set_content(body.dump(-1, ' ', false, Json::error_handler_t::replace), "application/json; charset=utf-8");
}

void send_error(httplib::Response& res, int status, const std::string& code, const std::string& detail) {
  send_json(res, status, Json{{"error", code}, {"detail", detail}});
}

Json parse_body(const httplib::Request& req) {
  Json body;
  try {
    body = Json::parse(req.body);
  } catch (const Json::exception& e) {
    throw ServiceError(400, "malformed_body", std::string("request body is not valid JSON: ") + e.what());
  }
  if (!body.is_object()) throw ServiceError(400, "malformed_body", "request body must be a JSON object");
  return body;
}

std::string string_field(const Json& body, const char* key) {
  if (!body.contains(key) || !body[key].is_string()) {
    throw ServiceError(400, "malformed_body", std::string("missing string field '") + key + "'");
  }
  return body[key].get<std::string>();
}

template <typename Fn>
httplib::Server::Handler guarded(Fn fn) {
  return [fn](const httplib::Request& req, httplib::Response& res) {
    try {
      fn(req, res);
    } catch (const ServiceError& e) {
      send_error(res, e.status(), e.code(), e.what());
    } catch (const std::exception& e) {
      log_error(std::string("request ") + req.method + " " + req.path + " failed: " + e.what());
      send_error(res, 500, "internal_error", e.what());
    }
  };
}

}  // namespace

ApiServer::ApiServer(SessionService& service) : service_(service), server_(std::make_unique<httplib::Server>()) {
  routes();
}

ApiServer::~ApiServer() { stop(); }

void ApiServer::routes() {
  auto& s = *server_;
  s.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                         {"Access-Control-Allow-Headers", "Content-Type"},
                         {"Access-Control-Allow-Methods", "GET, POST, DELETE, OPTIONS"}});
  s.Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });

  s.Get("/healthz", [](const httplib::Request&, httplib::Response& res) { send_json(res, 200, {{"status", "ok"}}); });

  s.Post("/sessions", guarded([this](const httplib::Request& req, httplib::Response& res) {
           const Json body = parse_body(req);
           const std::string id = service_.create(string_field(body, "seed"));
           send_json(res, 201, {{"session_id", id}});
         }));

  s.Post(R"(/sessions/([^/]+)/utterances)", guarded([this](const httplib::Request& req, httplib::Response& res) {
           const std::string id = req.matches[1];
           const Json body = parse_body(req);
           const Response r = service_.utter(id, string_field(body, "utterance"));
           send_json(res, 200, response_envelope(r, id));
         }));

  s.Get(R"(/sessions/([^/]+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
          send_json(res, 200, service_.summary(req.matches[1]));
        }));

  s.Delete(R"(/sessions/([^/]+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
             const std::string id = req.matches[1];
             if (!service_.remove(id)) throw ServiceError(404, "session_not_found", "no session '" + id + "'");
             send_json(res, 200, {{"deleted", id}});
           }));

  s.set_error_handler([](const httplib::Request& req, httplib::Response& res) {
    if (!res.body.empty()) return;
    if (res.status == 404) {
      send_error(res, 404, "not_found", "no route for " + req.method + " " + req.path);
    } else {
      send_error(res, res.status, "http_error", "status " + std::to_string(res.status));
    }
  });
}

int ApiServer::start(const std::string& host, int port) {
  int bound = port == 0 ? server_->bind_to_any_port(host) : (server_->bind_to_port(host, port) ? port : -1);
  if (bound < 0) return -1;
  thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
  return bound;
}

bool ApiServer::listen(const std::string& host, int port) { return server_->listen(host, port); }

void ApiServer::stop() {
  if (server_) server_->stop();
  if (thread_.joinable()) thread_.join();
}

}  // namespace convbrowse
