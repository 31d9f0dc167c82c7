#include <gtest/gtest.h>

#include <algorithm>
#include <regex>

#include "fixtures.hpp"
#include "symboleo/core/parser.hpp"
#include "symboleo/core/printer.hpp"

namespace symboleo
{
namespace
{

const char * kSkeleton = R"(Contract Tiny

Parameters
  buyer : Buyer;
  prosumer : Prosumer;

Domain
  Buyer isA Role with name : String;
  Prosumer isA Role with name : String;
  DispatchEnergy isA Event with quantity : Number;

Declarations
  buyer : Buyer with name := buyer;
  prosumer : Prosumer with name := prosumer;
  evt_dispatch_energy : DispatchEnergy;

Obligations
%OBLIGATIONS%
Powers
%POWERS%
endContract
)";

std::string skeleton(const std::string & obligations, const std::string & powers = "")
{
  std::string s = kSkeleton;
  s.replace(s.find("%OBLIGATIONS%"), 13, obligations);
  s.replace(s.find("%POWERS%"), 8, powers);
  return s;
}

TEST(parser, obligation_statement_builds_expected_node)
{
  const auto r = parse(skeleton(
    "  O1 : Obligation(prosumer, buyer, true, Happens(evt_dispatch_energy));\n"));
  ASSERT_TRUE(r.spec) << (r.diagnostics.empty() ? "" : r.diagnostics.front().message);
  ASSERT_EQ(r.spec->obligations.size(), 1u);
  const auto & o = r.spec->obligations.front();
  EXPECT_EQ(o.id, "O1");
  EXPECT_EQ(o.debtor, "prosumer");
  EXPECT_EQ(o.creditor, "buyer");
  EXPECT_EQ(o.trigger, make_true());
  EXPECT_EQ(o.consequent, make_happens("evt_dispatch_energy"));
}

TEST(parser, empty_sections_give_empty_spec_lists)
{
  const auto r = parse(skeleton(""));
  ASSERT_TRUE(r.spec);
  EXPECT_TRUE(r.diagnostics.empty());
  EXPECT_TRUE(r.spec->obligations.empty());
  EXPECT_TRUE(r.spec->powers.empty());
}

TEST(parser, missing_semicolon_reports_e001_without_spec)
{
  const auto src = skeleton("  O1 : Obligation(prosumer, buyer, true, Happens(evt_dispatch_energy))\n");
  const auto r = parse(src);
  EXPECT_FALSE(r.spec);
  ASSERT_FALSE(r.diagnostics.empty());
  EXPECT_EQ(r.diagnostics.front().code, codes::kSyntax);
  // The offending token is `Powers` on the following line.
  const auto powers_line = std::count(src.begin(), src.begin() + src.find("Powers"), '\n') + 1;
  EXPECT_EQ(r.diagnostics.front().span.start.line, powers_line);
}

TEST(parser, recovers_to_report_several_errors)
{
  const auto r = parse(skeleton(
    "  O1 : Obligation(prosumer, buyer, true, );\n"
    "  O2 : Obligation(prosumer buyer, true, true);\n"
    "  O3 : Obligation(prosumer, buyer, true, true);\n"));
  EXPECT_FALSE(r.spec);
  EXPECT_GE(r.diagnostics.size(), 2u);
  for (const auto & d : r.diagnostics) {
    EXPECT_EQ(d.code, codes::kSyntax);
  }
  const auto best = parse_recovering(skeleton(
    "  O1 : Obligation(prosumer, buyer, true, );\n"
    "  O3 : Obligation(prosumer, buyer, true, true);\n"));
  ASSERT_TRUE(best.spec);
  ASSERT_EQ(best.spec->obligations.size(), 1u);
  EXPECT_EQ(best.spec->obligations.front().id, "O3");
}

TEST(parser, te_fixture_parses_cleanly)
{
  const auto r = parse(testing::te_source());
  ASSERT_TRUE(r.spec);
  EXPECT_TRUE(r.diagnostics.empty());
  EXPECT_EQ(r.spec->name, "TransactiveEnergy");
  EXPECT_EQ(r.spec->obligations.size(), 2u);
  EXPECT_EQ(r.spec->powers.size(), 4u);
  ASSERT_EQ(r.spec->imposable_obligations().size(), 1u);
  EXPECT_EQ(r.spec->imposable_obligations().front()->id, "O_late_fee");
}

TEST(printer, idempotent_on_te_fixture)
{
  const auto once = print(testing::te_spec());
  const auto again = parse(once);
  ASSERT_TRUE(again.spec);
  EXPECT_EQ(print(*again.spec), once);
  EXPECT_EQ(*again.spec, testing::te_spec());
}

TEST(printer, whitespace_differences_canonicalize)
{
  auto src = testing::te_source();
  std::string messy = std::regex_replace(src, std::regex(" : "), "   :\t");
  messy = std::regex_replace(messy, std::regex(", "), " ,\n      ");
  const auto r = parse(messy);
  ASSERT_TRUE(r.spec) << r.diagnostics.front().message;
  EXPECT_EQ(print(*r.spec), print(testing::te_spec()));
}

TEST(printer, one_line_per_obligation_and_power)
{
  const auto text = print(testing::te_spec());
  const auto spec = testing::te_spec();
  for (const auto & o : spec.obligations) {
    const auto at = text.find("  " + o.id + " : Obligation(");
    ASSERT_NE(at, std::string::npos);
    const auto eol = text.find('\n', at);
    EXPECT_EQ(text.substr(at, eol - at).back(), ';');
  }
  for (const auto & p : spec.powers) {
    const auto at = text.find("  " + p.id + " : Power(");
    ASSERT_NE(at, std::string::npos);
    const auto eol = text.find('\n', at);
    EXPECT_EQ(text.substr(at, eol - at).back(), ';');
  }
}

TEST(printer, parenthesizes_right_nested_same_precedence)
{
  const auto r = parse(skeleton(
    "  O1 : Obligation(prosumer, buyer, true, Happens(evt_dispatch_energy) and "
    "(Happens(evt_dispatch_energy) and not Happens(evt_dispatch_energy)));\n"));
  ASSERT_TRUE(r.spec);
  const auto printed = print(r.spec->obligations.front().consequent);
  EXPECT_NE(printed.find("and (Happens"), std::string::npos) << printed;
  const auto back = parse(print(*r.spec));
  ASSERT_TRUE(back.spec);
  EXPECT_EQ(*back.spec, *r.spec);
}

TEST(printer, numbers_and_strings)
{
  EXPECT_EQ(format_number(100), "100");
  EXPECT_EQ(format_number(2.5), "2.5");
  EXPECT_EQ(format_number(-0.25), "-0.25");
  EXPECT_EQ(print(Value::of_string("a \"b\"\n")), "\"a \\\"b\\\"\\n\"");
}

TEST(parser, total_on_garbage)
{
  const std::vector<std::string> inputs{
    "", "Contract", "Contract X", "endContract", "((((", "Contract X Parameters a : ; endContract",
    "\xff\xfe", std::string(5000, '('), "Contract X\nObligations\n O : Obligation(a, b, c, d, e, f);\nendContract"};
  for (const auto & in : inputs) {
    const auto r = parse(in);
    if (!r.spec) {
      EXPECT_TRUE(has_errors(r.diagnostics)) << in.substr(0, 40);
    }
  }
}

}  // namespace
}  // namespace symboleo
