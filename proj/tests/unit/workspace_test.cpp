#include <gtest/gtest.h>

#include <filesystem>
#include <random>
#include <thread>

#include "fixtures.hpp"
#include "symboleo/common/error.hpp"
#include "symboleo/core/printer.hpp"
#include "symboleo/service/workspace.hpp"

namespace symboleo::service
{
namespace
{

namespace fs = std::filesystem;

class TempDir
{
public:
  TempDir()
  {
    std::random_device rd;
    path_ = fs::temp_directory_path() / ("symboleo-ws-" + std::to_string(rd()));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path & path() const { return path_; }

private:
  fs::path path_;
};

template <typename F>
std::string error_code(F && f)
{
  try {
    f();
  } catch (const Error & e) {
    return e.code();
  }
  return "";
}

struct Seeded
{
  std::string tpl;
  std::string spec;
  std::string pair;
};

Seeded seed(Workspace & ws)
{
  Seeded s;
  s.tpl = ws.add_template(testing::te_template());
  s.spec = ws.add_spec(print(testing::te_spec()));
  s.pair = ws.create_pair(s.tpl, s.spec, {});
  return s;
}

TEST(workspace, ids_are_sequential_per_kind)
{
  Workspace ws;
  const auto s = seed(ws);
  EXPECT_EQ(s.tpl, "tpl-1");
  EXPECT_EQ(s.spec, "spec-1");
  EXPECT_EQ(s.pair, "pair-1");
  EXPECT_EQ(ws.add_spec("x"), "spec-2");
}

TEST(workspace, unknown_ids_are_e404)
{
  Workspace ws;
  const auto s = seed(ws);
  EXPECT_EQ(error_code([&] { ws.create_pair("tpl-9", s.spec, {}); }), "E404");
  EXPECT_EQ(error_code([&] { ws.create_pair(s.tpl, "spec-9", {}); }), "E404");
  EXPECT_EQ(error_code([&] { ws.refine("pair-9", "P1: before March 31, 2024"); }), "E404");
  EXPECT_EQ(error_code([&] { ws.add_bundle("spec-9"); }), "E404");
  EXPECT_EQ(error_code([&] { ws.instance_status("inst-9"); }), "E404");
  EXPECT_FALSE(ws.get_spec("spec-9"));
}

TEST(workspace, bind_errors_surface_with_their_code)
{
  Workspace ws;
  const auto s = seed(ws);
  auto map = tmpl::identity_map(testing::te_template());
  map["energy_qnt"] = "location";  // Number slot bound to a String parameter
  EXPECT_EQ(error_code([&] { ws.create_pair(s.tpl, s.spec, map); }), "E503");
}

TEST(workspace, refinement_chain_records_provenance)
{
  Workspace ws;
  const auto s = seed(ws);
  const auto a = ws.refine(s.pair, "P1: before March 31, 2024");
  const auto b = ws.refine(s.pair, "P2: within 2 weeks of Prosumer dispatching energy");
  const auto pair = *ws.get_pair(s.pair);
  EXPECT_EQ(pair.version, 3);
  EXPECT_EQ(pair.spec, b.spec_id);
  ASSERT_EQ(pair.history.size(), 2u);
  EXPECT_EQ(pair.history[1].parent_spec, a.spec_id);
  const auto spec = *ws.get_spec(b.spec_id);
  EXPECT_EQ(spec.parent, a.spec_id);
  EXPECT_EQ(spec.refinement, "P2: within 2 weeks of Prosumer dispatching energy");
  EXPECT_EQ(spec.text, print(testing::te_refined("R4R3").pair.spec));

  // A failed refinement leaves the pair untouched.
  EXPECT_EQ(error_code([&] { ws.refine(s.pair, "P1: after March 1, 2024"); }), "E605");
  EXPECT_EQ(ws.get_pair(s.pair)->version, 3);
}

TEST(workspace, replay_reproduces_every_spec)
{
  Workspace ws;
  const auto s = seed(ws);
  ws.refine(s.pair, "P1: between [START_DATE] and [END_DATE]");
  ws.refine(s.pair, "P2: before March 31, 2024");
  const auto texts = ws.replay_pair(s.pair);
  const auto pair = *ws.get_pair(s.pair);
  ASSERT_EQ(texts.size(), 2u);
  for (std::size_t i = 0; i < texts.size(); ++i) {
    EXPECT_EQ(texts[i], ws.get_spec(pair.history[i].spec)->text);
  }
}

TEST(workspace, persists_and_reloads)
{
  TempDir dir;
  std::string inst_id;
  std::string pair_id;
  nlohmann::json status_before;
  {
    Workspace ws{dir.path()};
    const auto s = seed(ws);
    pair_id = s.pair;
    const auto r = ws.refine(s.pair, "P2: before March 31, 2024");
    ws.add_bundle(r.spec_id);
    const auto params = nlohmann::json::parse(testing::slurp(testing::te_dir() + "/params.json"));
    inst_id = ws.create_instance(r.spec_id, params, "2024-01-01").first;
    ws.instance_op(inst_id, {{"op", "tick"}, {"at", "2024-04-01"}});
    ws.instance_op(inst_id, {{"op", "exert"}, {"power", "P_suspend"}});
    // Failed ops are not recorded.
    EXPECT_EQ(error_code([&] { ws.instance_op(inst_id, {{"op", "tick"}, {"at", "2024-01-01"}}); }), "E802");
    status_before = runtime::to_json(ws.instance_status(inst_id));
  }
  EXPECT_TRUE(fs::exists(dir.path() / "pairs" / (pair_id + ".json")));
  EXPECT_TRUE(fs::exists(dir.path() / "instances" / (inst_id + ".json")));

  Workspace again{dir.path()};
  EXPECT_EQ(again.templates().size(), 1u);
  EXPECT_EQ(again.get_pair(pair_id)->version, 2);
  EXPECT_TRUE(again.get_bundle("bundle-1"));
  EXPECT_EQ(again.get_instance(inst_id)->ops.size(), 2u);
  EXPECT_EQ(runtime::to_json(again.instance_status(inst_id)), status_before);
  EXPECT_EQ(again.add_spec("y"), "spec-3");
}

TEST(workspace, concurrent_refinements_on_distinct_pairs)
{
  Workspace ws;
  const auto tpl = ws.add_template(testing::te_template());
  const auto spec = ws.add_spec(print(testing::te_spec()));
  std::vector<std::string> pairs;
  for (int i = 0; i < 4; ++i) {
    pairs.push_back(ws.create_pair(tpl, spec, {}));
  }
  std::vector<std::thread> threads;
  for (const auto & p : pairs) {
    threads.emplace_back([&ws, p] {
      ws.refine(p, "P1: before March 31, 2024");
      ws.refine(p, "P2: before March 31, 2024");
    });
  }
  for (auto & t : threads) {
    t.join();
  }
  const auto expected = print(testing::te_refined("R4R2").pair.spec);
  for (const auto & p : pairs) {
    const auto pr = *ws.get_pair(p);
    EXPECT_EQ(pr.version, 3);
    EXPECT_EQ(ws.get_spec(pr.spec)->text, expected);
  }
}

}  // namespace
}  // namespace symboleo::service
