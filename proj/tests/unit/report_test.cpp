#include <gtest/gtest.h>

#include <nlohmann/json.hpp>

#include "symboleo/loc/report.hpp"

namespace symboleo::loc
{
namespace
{

TEST(report, pct_formula_on_published_raw_counts)
{
  EXPECT_DOUBLE_EQ(pct_changed({2, 11, 0}, 608), 2.1);
  EXPECT_DOUBLE_EQ(pct_changed({34, 9, 8}, 632), 8.1);
  EXPECT_DOUBLE_EQ(pct_changed({0, 0, 0}, 608), 0.0);
  EXPECT_DOUBLE_EQ(pct_changed({3, 0, 0}, 0), 0.0);
}

TEST(report, round1_half_away_from_zero)
{
  EXPECT_DOUBLE_EQ(round1(2.25), 2.3);
  EXPECT_DOUBLE_EQ(round1(2.24), 2.2);
  EXPECT_DOUBLE_EQ(round1(-2.25), -2.3);
}

ReportInput input(const std::string & label, const std::string & sym, FileMap files)
{
  return ReportInput{label, sym, std::move(files)};
}

TEST(report, columns_and_renderings)
{
  const auto base = input("Init", "a\nb\n", {{"x.js", "1\n2\n3\n4\n5\n6\n7\n8\n9\n10\n"}});
  const auto same = input("R0", "a\nb\n", base.bundle);
  const auto grown = input("R1", "a\nb2\nc\n", {{"x.js", "1\n2\n3\n4\n5\n6\n7\n8\n9\n10\n"}, {"y.js", "11\n12\n"}});
  const auto r = build_report(base, {same, grown});
  ASSERT_EQ(r.columns.size(), 3u);
  EXPECT_EQ(r.columns[0].label, "Init");
  EXPECT_DOUBLE_EQ(r.columns[0].ratio, 5.0);
  EXPECT_DOUBLE_EQ(r.columns[1].pct_changed, 0.0);
  EXPECT_EQ(r.columns[2].sym_diff, (DiffStat{1, 1, 0}));
  EXPECT_EQ(r.columns[2].sc_diff, (DiffStat{2, 0, 0}));
  EXPECT_EQ(r.columns[2].sc_files, 2u);
  EXPECT_DOUBLE_EQ(r.columns[2].pct_changed, 16.7);
  EXPECT_DOUBLE_EQ(r.columns[2].ratio, 4.0);

  const auto csv = to_csv(r);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "metric,Init,R0,R1");
  EXPECT_NE(csv.find("\npct_changed,0.0,0.0,16.7\n"), std::string::npos);
  EXPECT_NE(csv.find("\nsc_to_symboleo_ratio,5.0,5.0,4.0\n"), std::string::npos);

  const auto text = to_text(r);
  EXPECT_NE(text.find("pct_changed"), std::string::npos);

  const nlohmann::json j = r;
  ASSERT_EQ(j["columns"].size(), 3u);
  EXPECT_EQ(j["columns"][2]["sc"]["diff"]["added"], 2);
  EXPECT_EQ(j["columns"][2]["pctChanged"], 16.7);
}

}  // namespace
}  // namespace symboleo::loc
