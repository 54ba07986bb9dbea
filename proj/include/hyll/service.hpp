#ifndef HYLL_SERVICE_HPP
#define HYLL_SERVICE_HPP

#include <chrono>
#include <functional>
#include <iosfwd>
#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <string>

#include <json.hpp>

#include "hyll/script.hpp"

namespace hyll {

using Json = nlohmann::json;

// JSON views shared by the service and the --json command output.
Json error_json(const std::exception& e);
Json goal_json(const GoalView& g);
Json state_json(const ProofState& ps);
Json verdict_json(const CertificateVerdict& v);
Json witnesses_json(const Certificate& c);

struct ServiceOptions {
  std::string examples_dir = ".";
  std::chrono::seconds idle_timeout{30 * 60};
  std::function<std::chrono::steady_clock::time_point()> now = [] { return std::chrono::steady_clock::now(); };
};

struct Reply {
  int status = 200;
  Json body;
};

// Session store behind the HTTP API documented in docs/api.md. handle() is
// thread safe and never throws.
class SessionService {
 public:
  explicit SessionService(ServiceOptions opt = {});
  Reply handle(const std::string& method, const std::string& path, const std::string& body);
  std::size_t session_count();

 private:
  struct Entry {
    std::mutex lock;
    std::unique_ptr<Session> session;
    std::chrono::steady_clock::time_point touched;
  };

  ServiceOptions opt_;
  std::mutex lock_;
  std::map<std::string, std::shared_ptr<Entry>> sessions_;
  std::uint64_t counter_ = 0;
  std::mt19937_64 rng_;

  void expire();
  std::shared_ptr<Entry> find(const std::string& id);
  Reply create(const Json& req);
  Reply on_session(const std::string& id, const std::string& action, const std::string& method, const Json& req);
  Reply examples();
  Reply example(const std::string& name);
};

// HTTP front end for a SessionService.
class HttpServer {
 public:
  explicit HttpServer(SessionService& svc);
  ~HttpServer();
  // Binds and serves on a background thread. Port 0 picks a free port.
  // Returns the bound port, or -1 if binding failed.
  int start(const std::string& host, int port);
  bool running() const;
  void wait();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Entry point of the hyll command-line tool.
int run_cli(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace hyll

#endif
