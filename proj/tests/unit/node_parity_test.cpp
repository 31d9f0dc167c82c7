// The generated JavaScript, run under node, must reach the same states as
// the C++ runtime on every fixture scenario.

#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <random>

#include <sys/wait.h>

#include "fixtures.hpp"
#include "symboleo/codegen/generator.hpp"
#include "symboleo/runtime/scenario.hpp"
#include "symboleo/service/zip.hpp"

namespace symboleo
{
namespace
{

namespace fs = std::filesystem;

std::string node_binary()
{
  const std::string n = SYMBOLEO_NODE;
  return n.find("NOTFOUND") == std::string::npos ? n : std::string{};
}

struct Run
{
  int status = 0;
  std::string out;
};

Run shell(const std::string & cmd)
{
  Run r;
  FILE * p = popen(cmd.c_str(), "r");
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) {
    r.out.append(buf.data(), n);
  }
  r.status = WEXITSTATUS(pclose(p));
  return r;
}

class NodeParity : public ::testing::Test
{
protected:
  void SetUp() override
  {
    if (node_binary().empty()) {
      GTEST_SKIP() << "node not found";
    }
    std::random_device rd;
    root_ = fs::temp_directory_path() / ("symboleo-node-" + std::to_string(rd()));
    fs::create_directories(root_);
  }
  void TearDown() override
  {
    if (!root_.empty()) {
      fs::remove_all(root_);
    }
  }

  fs::path write_bundle(const std::string & name, const SymboleoSpec & spec)
  {
    const auto dir = root_ / name;
    service::write_tree(dir, service::bundle_tree(codegen::generate(spec)));
    return dir;
  }

  fs::path root_;
};

TEST_F(NodeParity, generated_files_are_valid_javascript)
{
  std::vector<std::pair<std::string, SymboleoSpec>> specs{{"Init", testing::te_spec()}};
  for (const auto & l : testing::refinement_labels()) {
    specs.emplace_back(l, testing::te_refined(l).pair.spec);
  }
  for (const auto & [label, spec] : specs) {
    const auto dir = write_bundle(label, spec);
    for (const auto & e : fs::recursive_directory_iterator(dir)) {
      if (e.path().extension() == ".js") {
        const auto r = shell(node_binary() + " --check " + e.path().string() + " 2>&1");
        EXPECT_EQ(r.status, 0) << label << " " << e.path() << "\n" << r.out;
      }
    }
  }
}

TEST_F(NodeParity, scenarios_agree_with_cpp_runtime)
{
  const auto index = nlohmann::json::parse(testing::slurp(testing::te_dir() + "/scenarios/index.json"));
  for (const auto & e : index) {
    const std::string label = e["refinement"];
    const std::string file = testing::te_dir() + "/scenarios/" + e["file"].get<std::string>();
    const std::string start = e["start"];
    const auto spec = testing::te_refined(label).pair.spec;

    auto c = std::make_shared<const runtime::CompiledContract>(runtime::compile(spec, testing::te_params()));
    runtime::ContractInstance inst{c, *parse_timestamp(start)};
    const auto cpp = runtime::run_scenario(inst, runtime::parse_scenario(testing::slurp(file)));

    const auto dir = write_bundle(e["name"].get<std::string>(), spec);
    const auto r = shell(
      "NODE_PATH=" + (dir / "lib").string() + " " + node_binary() + " " + SYMBOLEO_REPLAY_JS + " " + dir.string() +
      " " + testing::te_dir() + "/params.json " + file + " " + start);
    ASSERT_EQ(r.status, 0) << r.out;
    const auto js = nlohmann::json::parse(r.out);

    EXPECT_EQ(js["ok"], cpp.ok) << e["name"];
    ASSERT_EQ(js["steps"].size(), cpp.steps.size()) << e["name"];
    for (std::size_t i = 0; i < cpp.steps.size(); ++i) {
      EXPECT_EQ(js["steps"][i]["ok"], cpp.steps[i].ok) << e["name"] << " line " << cpp.steps[i].line;
      if (!cpp.steps[i].error_code.empty()) {
        EXPECT_EQ(js["steps"][i]["error"], cpp.steps[i].error_code) << e["name"] << " line " << cpp.steps[i].line;
      }
    }
    const auto & f = cpp.final;
    EXPECT_EQ(js["final"]["state"], std::string{to_string(f.state)}) << e["name"];
    EXPECT_EQ(js["final"]["clock"], format_timestamp(f.clock)) << e["name"];
    nlohmann::json obligations = nlohmann::json::object();
    for (const auto & [id, st] : f.obligations) {
      obligations[id] = std::string{to_string(st)};
    }
    nlohmann::json powers = nlohmann::json::object();
    for (const auto & [id, st] : f.powers) {
      powers[id] = std::string{to_string(st)};
    }
    EXPECT_EQ(js["final"]["obligations"], obligations) << e["name"];
    EXPECT_EQ(js["final"]["powers"], powers) << e["name"];
  }
}

}  // namespace
}  // namespace symboleo
