#pragma once

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>

#include "convbrowse/dialog.hpp"
#include "convbrowse/serialize.hpp"

namespace httplib {
class Server;
}

namespace convbrowse {

// Carries the HTTP status and the {error, detail} body of a failed request.
class ServiceError : public std::runtime_error {
 public:
  ServiceError(int status, std::string code, const std::string& detail)
      : std::runtime_error(detail), status_(status), code_(std::move(code)) {}
  int status() const noexcept { return status_; }
  const std::string& code() const noexcept { return code_; }

 private:
  int status_;
  std::string code_;
};

// Session table with idle expiry and strict per-session request ordering.
class SessionService {
 public:
  using SteadyClock = std::function<std::chrono::steady_clock::time_point()>;

  explicit SessionService(std::shared_ptr<Browser> browser,
                          std::chrono::milliseconds idle_timeout = std::chrono::minutes(30),
                          SteadyClock clock = [] { return std::chrono::steady_clock::now(); });

  // Throws ServiceError 422 when the seed cannot be opened.
  std::string create(const std::string& seed);

  // Requests on one session run one at a time, in arrival order.
  // Throws ServiceError 404 for unknown or expired sessions.
  Response utter(const std::string& session_id, const std::string& utterance);

  Json summary(const std::string& session_id);
  bool remove(const std::string& session_id);

  std::size_t expire_idle();
  std::size_t size() const;

 private:
  struct Entry {
    std::unique_ptr<Session> session;
    std::mutex mutex;
    std::condition_variable turn;
    std::uint64_t next_ticket = 0;
    std::uint64_t serving = 0;
    std::chrono::steady_clock::time_point last_used;
  };

  std::shared_ptr<Entry> find(const std::string& session_id);
  template <typename Fn>
  auto in_order(const std::string& session_id, Fn fn);

  std::shared_ptr<Browser> browser_;
  std::chrono::milliseconds idle_timeout_;
  SteadyClock clock_;
  mutable std::mutex mutex_;
  std::map<std::string, std::shared_ptr<Entry>> sessions_;
};

// JSON over HTTP:
//   POST   /sessions                   {seed}      -> {session_id}
//   POST   /sessions/{id}/utterances   {utterance} -> {text, items, kind, session_id}
//   GET    /sessions/{id}                          -> session summary
//   DELETE /sessions/{id}
//   GET    /healthz
// Errors are {error, detail} with status 400, 404, 422 or 500.
class ApiServer {
 public:
  explicit ApiServer(SessionService& service);
  ~ApiServer();

  // Binds and serves on a background thread. Port 0 picks a free port.
  // Returns the bound port, or -1 on failure.
  int start(const std::string& host, int port);
  // Serves on the calling thread until stop().
  bool listen(const std::string& host, int port);
  void stop();

 private:
  void routes();

  SessionService& service_;
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
};

}  // namespace convbrowse
