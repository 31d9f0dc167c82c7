#include <gtest/gtest.h>

#include <random>
#include <regex>

#include "fixtures.hpp"
#include "symboleo/common/error.hpp"
#include "symboleo/tmpl/template.hpp"

namespace symboleo::tmpl
{
namespace
{

std::map<std::string, std::string> te_values()
{
  std::map<std::string, std::string> out;
  const auto j = nlohmann::json::parse(testing::slurp(testing::te_dir() + "/values.json"));
  for (const auto & [k, v] : j.items()) {
    out[k] = v.get<std::string>();
  }
  return out;
}

std::vector<std::string> codes_of(const std::vector<Diagnostic> & d)
{
  std::vector<std::string> out;
  for (const auto & x : d) {
    out.push_back(x.code);
  }
  return out;
}

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

TEST(template_engine, te_pair_binds_slots_to_obligations)
{
  const auto t = testing::te_template();
  EXPECT_TRUE(check_template(t).empty());
  const auto b = bind_pair(t, testing::te_spec(), identity_map(t));
  ASSERT_TRUE(b.pair);
  EXPECT_TRUE(b.diagnostics.empty());
  EXPECT_EQ(b.pair->tmpl.find_slot("P1")->obligation, "O_deliver");
  EXPECT_EQ(b.pair->tmpl.find_slot("P2")->obligation, "O_pay");
  EXPECT_EQ(b.pair->tmpl.find_slot("P1")->clause, 0u);
  EXPECT_EQ(b.pair->tmpl.find_slot("P2")->clause, 2u);
}

TEST(template_engine, dangling_slot_binding_is_e502)
{
  auto t = testing::te_template();
  t.slots[1].obligation = "O_missing";
  const auto b = bind_pair(t, testing::te_spec(), identity_map(t));
  EXPECT_FALSE(b.pair);
  EXPECT_EQ(codes_of(b.diagnostics), std::vector<std::string>{"E502"});
}

TEST(template_engine, unmapped_parameter_is_e501_naming_it)
{
  const auto t = testing::te_template();
  auto m = identity_map(t);
  m.erase("location");
  const auto b = bind_pair(t, testing::te_spec(), m);
  EXPECT_FALSE(b.pair);
  ASSERT_EQ(codes_of(b.diagnostics), std::vector<std::string>{"E501"});
  EXPECT_NE(b.diagnostics.front().message.find("location"), std::string::npos);
}

TEST(template_engine, kind_changing_map_is_e503)
{
  const auto t = testing::te_template();
  auto m = identity_map(t);
  m["energy_qnt"] = "location";
  const auto b = bind_pair(t, testing::te_spec(), m);
  EXPECT_FALSE(b.pair);
  EXPECT_EQ(codes_of(b.diagnostics), std::vector<std::string>{"E503"});
}

TEST(template_engine, instantiate_substitutes_values)
{
  const auto text = instantiate(testing::te_template(), te_values());
  EXPECT_NE(text.find("Prosumer shall dispatch 100 kW of power to the Buyer"), std::string::npos);
  EXPECT_NE(text.find("as of 2024-01-01, between Ottawa Hydro Co-op as Buyer"), std::string::npos);
}

TEST(template_engine, instantiate_leaves_no_markup)
{
  const auto text = instantiate(testing::te_template(), te_values());
  EXPECT_FALSE(std::regex_search(text, std::regex("<[A-Za-z_]+>")));
  EXPECT_FALSE(std::regex_search(text, std::regex("\\[P[0-9]+\\]")));
  for (int k = 1; k <= 5; ++k) {
    EXPECT_NE(text.find("\n" + std::to_string(k) + ". "), std::string::npos) << k;
  }
  EXPECT_EQ(text.find("\n6. "), std::string::npos);
}

TEST(template_engine, instantiate_kind_errors)
{
  const auto t = testing::te_template();
  auto v = te_values();
  v["energy_qnt"] = "abc";
  EXPECT_EQ(error_code([&] { instantiate(t, v); }), "E505");
  v = te_values();
  v["date"] = "tomorrow";
  EXPECT_EQ(error_code([&] { instantiate(t, v); }), "E505");
  v = te_values();
  v.erase("amount");
  EXPECT_EQ(error_code([&] { instantiate(t, v); }), "E504");
}

TEST(template_engine, instantiation_preserves_structure_for_any_values)
{
  const auto t = testing::te_template();
  std::mt19937 rng{3};
  for (int i = 0; i < 100; ++i) {
    auto v = te_values();
    v["energy_qnt"] = std::to_string(rng() % 100000);
    v["buyer"] = "Party " + std::to_string(rng() % 1000);
    v["location"] = std::string(1 + rng() % 20, 'x');
    const auto a = instantiate(t, v);
    EXPECT_EQ(a, instantiate(t, v));
    std::size_t pos = 0;
    for (std::size_t k = 1; k <= t.clauses.size(); ++k) {
      const auto at = a.find("\n" + std::to_string(k) + ". ", pos);
      ASSERT_NE(at, std::string::npos);
      pos = at + 1;
    }
    EXPECT_FALSE(std::regex_search(a, std::regex("<[A-Za-z_]+>|\\[P[0-9]+\\]")));
  }
}

TEST(template_engine, json_round_trip)
{
  const auto t = testing::te_template();
  EXPECT_EQ(template_from_json(to_json(t)), t);
}

TEST(template_engine, malformed_templates_are_e507)
{
  auto j = to_json(testing::te_template());
  j["slots"][0]["anchor"] = 3;
  EXPECT_EQ(error_code([&] { template_from_json(j); }), "E507");
  j = to_json(testing::te_template());
  j["clauses"][1] = "Deliver to <somewhere>.";
  EXPECT_EQ(error_code([&] { template_from_json(j); }), "E507");
  EXPECT_EQ(error_code([] { template_from_json(nlohmann::json::array()); }), "E507");
}

TEST(template_engine, record_refinement_rejects_duplicates)
{
  auto p = testing::te_pair();
  record_refinement(p, "P1", true);
  record_refinement(p, "P1", false);
  EXPECT_EQ(error_code([&] { record_refinement(p, "P1", true); }), "E506");
  EXPECT_EQ(error_code([&] { record_refinement(p, "P9", true); }), "E601");
}

TEST(template_engine, insert_adjunct_shifts_later_anchors)
{
  ContractTemplate t;
  t.name = "T";
  t.clauses = {"Do A [P1] and B [P2]."};
  t.slots = {{"P1", 0, 5, "O1"}, {"P2", 0, 16, "O2"}};
  ASSERT_TRUE(check_template(t).empty());
  insert_adjunct(t, "P1", "today");
  EXPECT_EQ(t.clauses[0], "Do A today [P1] and B [P2].");
  EXPECT_TRUE(check_template(t).empty());
  EXPECT_EQ(render_template(t), "1. Do A today and B.\n");
}

}  // namespace
}  // namespace symboleo::tmpl
