#include "symboleo/service/server.hpp"

#include <httplib.h>

#include "symboleo/service/api.hpp"

namespace symboleo::service
{

struct Server::Impl
{
  Impl(Workspace & ws, ServerOptions o) : api(ws), options(std::move(o)) {}

  Api api;
  ServerOptions options;
  httplib::Server http;
};

Server::Server(Workspace & ws, ServerOptions options) : impl_(std::make_unique<Impl>(ws, std::move(options)))
{
  auto & http = impl_->http;
  auto forward = [this](const httplib::Request & req, httplib::Response & res) {
    const ApiResponse r = impl_->api.handle({req.method, req.path, req.body});
    res.status = r.status;
    res.set_content(r.body, r.content_type);
  };
  const std::string api_routes = "/v1/.*";
  http.Get(api_routes, forward);
  http.Post(api_routes, forward);

  const auto & ui = impl_->options.ui_dir;
  if (!ui.empty() && std::filesystem::is_directory(ui)) {
    http.set_mount_point("/ui", ui.string());
  }
}

Server::~Server() { stop(); }

int Server::bind()
{
  auto & o = impl_->options;
  if (o.port == 0) {
    o.port = impl_->http.bind_to_any_port(o.host);
    return o.port;
  }
  return impl_->http.bind_to_port(o.host, o.port) ? o.port : -1;
}

bool Server::listen() { return impl_->http.listen_after_bind(); }

void Server::stop()
{
  if (impl_) {
    impl_->http.stop();
  }
}

void Server::wait_until_ready() const { impl_->http.wait_until_ready(); }

}  // namespace symboleo::service
