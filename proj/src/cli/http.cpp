#include <httplib.h>

#include <thread>

#include "hyll/service.hpp"

namespace hyll {

struct HttpServer::Impl {
  SessionService& svc;
  httplib::Server server;
  std::thread worker;
  explicit Impl(SessionService& s) : svc(s) {}
};

HttpServer::HttpServer(SessionService& svc) : impl_(std::make_unique<Impl>(svc)) {
  auto route = [this](const httplib::Request& req, httplib::Response& res) {
    Reply r = impl_->svc.handle(req.method, req.path, req.body);
    res.status = r.status;
    res.set_content(r.body.dump(), "application/json");
  };
  auto& s = impl_->server;
  s.set_payload_max_length(1 << 20);
  s.Get(".*", route);
  s.Post(".*", route);
  s.Delete(".*", route);
  s.Put(".*", route);
  s.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr) {
    res.status = 500;
    res.set_content(R"({"error":{"kind":"Internal","message":"unhandled failure"}})", "application/json");
  });
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::start(const std::string& host, int port) {
  auto& s = impl_->server;
  int bound = port == 0 ? s.bind_to_any_port(host) : (s.bind_to_port(host, port) ? port : -1);
  if (bound < 0) return -1;
  impl_->worker = std::thread([this] { impl_->server.listen_after_bind(); });
  return bound;
}

bool HttpServer::running() const { return impl_->server.is_running(); }

void HttpServer::wait() {
  if (impl_->worker.joinable()) impl_->worker.join();
}

void HttpServer::stop() {
  if (!impl_) return;
  impl_->server.stop();
  wait();
}

}  // namespace hyll
