#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <thread>

#include <httplib.h>

#include "fixtures.hpp"
#include "symboleo/service/server.hpp"

namespace symboleo::service
{
namespace
{

namespace fs = std::filesystem;

TEST(server, serves_api_and_ui_on_a_real_socket)
{
  std::random_device rd;
  const fs::path ui = fs::temp_directory_path() / ("symboleo-ui-" + std::to_string(rd()));
  fs::create_directories(ui);
  std::ofstream{ui / "index.html"} << "<html>symboleo</html>";

  Workspace ws;
  Server server{ws, {"127.0.0.1", 0, ui}};
  const int port = server.bind();
  ASSERT_GT(port, 0);
  std::thread loop{[&] { server.listen(); }};
  server.wait_until_ready();

  httplib::Client client{"127.0.0.1", port};
  const nlohmann::json body{{"text", testing::te_source()}};
  auto res = client.Post("/v1/parse", body.dump(), "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  EXPECT_EQ(nlohmann::json::parse(res->body)["ok"], true);

  res = client.Get("/v1/specs/spec-1");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);

  res = client.Get("/v1/specs/spec-77");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 404);
  EXPECT_EQ(nlohmann::json::parse(res->body)["code"], "E404");

  res = client.Post("/v1/specs/spec-1/generate", "{}", "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  res = client.Get("/v1/bundles/bundle-1/archive");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->get_header_value("Content-Type"), "application/zip");

  res = client.Get("/ui/index.html");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  EXPECT_EQ(res->body, "<html>symboleo</html>");

  server.stop();
  loop.join();
  fs::remove_all(ui);
}

}  // namespace
}  // namespace symboleo::service
