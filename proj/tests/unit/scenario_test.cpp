#include <gtest/gtest.h>

#include <chrono>

#include "fixtures.hpp"
#include "symboleo/common/error.hpp"
#include "symboleo/runtime/scenario.hpp"

namespace symboleo::runtime
{
namespace
{

struct Fixture
{
  std::string name;
  std::string refinement;
  std::string start;
  std::string file;
};

std::vector<Fixture> scenario_index()
{
  std::vector<Fixture> out;
  for (const auto & e : nlohmann::json::parse(testing::slurp(testing::te_dir() + "/scenarios/index.json"))) {
    out.push_back({e["name"], e["refinement"], e["start"], e["file"]});
  }
  return out;
}

ScenarioResult run(const Fixture & f)
{
  auto c = std::make_shared<const CompiledContract>(
    compile(testing::te_refined(f.refinement).pair.spec, testing::te_params()));
  ContractInstance inst{c, *parse_timestamp(f.start)};
  return run_scenario(inst, parse_scenario(testing::slurp(testing::te_dir() + "/scenarios/" + f.file)));
}

TEST(scenario, fixtures_pass_quickly_and_deterministically)
{
  const auto index = scenario_index();
  ASSERT_EQ(index.size(), 5u);
  for (const auto & f : index) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto a = run(f);
    const auto elapsed = std::chrono::steady_clock::now() - t0;
    EXPECT_TRUE(a.ok) << f.name;
    for (const auto & s : a.steps) {
      EXPECT_TRUE(s.ok) << f.name << " line " << s.line << ": " << s.error;
    }
    EXPECT_LT(elapsed, std::chrono::seconds(1)) << f.name;
    EXPECT_EQ(to_json(run(f)), to_json(a)) << f.name;
  }
}

TEST(scenario, final_states)
{
  std::map<std::string, std::string> expected{
    {"fulfilled", "Fulfilled"},
    {"late_payment", "InEffect"},
    {"over_voltage", "Terminated"},
    {"missed_delivery", "InEffect"}};
  for (const auto & f : scenario_index()) {
    const auto it = expected.find(f.name);
    if (it != expected.end()) {
      EXPECT_EQ(to_string(run(f).final.state), it->second) << f.name;
    }
  }
}

TEST(scenario, parse_rejects_bad_lines)
{
  EXPECT_EQ(parse_scenario("# only a comment\n\n").size(), 0u);
  for (const char * bad : {"{not json}", R"({"op":"dance"})", "[1,2]"}) {
    try {
      parse_scenario(bad);
      FAIL() << bad;
    } catch (const Error & e) {
      EXPECT_EQ(e.code(), "E400");
    }
  }
}

TEST(scenario, stops_at_first_failing_step)
{
  auto c = std::make_shared<const CompiledContract>(compile(testing::te_spec(), testing::te_params()));
  ContractInstance inst{c, *parse_timestamp("2024-01-01")};
  const auto ops = parse_scenario(
    "{\"op\":\"expect\",\"id\":\"O_pay\",\"state\":\"Violated\"}\n"
    "{\"op\":\"tick\",\"at\":\"2024-02-01\"}\n");
  const auto r = run_scenario(inst, ops);
  EXPECT_FALSE(r.ok);
  ASSERT_EQ(r.steps.size(), 1u);
  EXPECT_EQ(r.steps.front().error_code, "E400");
  EXPECT_EQ(r.final.clock, *parse_timestamp("2024-01-01"));
  const auto j = to_json(r);
  EXPECT_EQ(j["ok"], false);
}

TEST(scenario, expect_error_requires_that_code)
{
  auto c = std::make_shared<const CompiledContract>(compile(testing::te_spec(), testing::te_params()));
  ContractInstance inst{c, *parse_timestamp("2024-01-01")};
  auto r = run_scenario(inst, parse_scenario(R"({"op":"exert","power":"P_suspend","expectError":"E804"})"));
  EXPECT_TRUE(r.ok);
  r = run_scenario(inst, parse_scenario(R"({"op":"tick","at":"2024-02-01","expectError":"E802"})"));
  EXPECT_FALSE(r.ok);
}

}  // namespace
}  // namespace symboleo::runtime
