#pragma once

#include <filesystem>
#include <memory>
#include <string>

#include "symboleo/service/workspace.hpp"

namespace symboleo::service
{

struct ServerOptions
{
  std::string host = "127.0.0.1";
  int port = 8080;  // 0 picks a free port
  // Built UI assets served under /ui/; skipped when empty or missing.
  std::filesystem::path ui_dir;
};

// HTTP front end: /v1/* goes to Api, /ui/* to static files.
class Server
{
public:
  Server(Workspace & ws, ServerOptions options);
  ~Server();
  Server(const Server &) = delete;
  Server & operator=(const Server &) = delete;

  // Binds and returns the port, or -1.
  int bind();
  // Blocks until stop().
  bool listen();
  void stop();
  void wait_until_ready() const;

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace symboleo::service
