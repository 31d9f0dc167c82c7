#include "symboleo/loc/report.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

#include <nlohmann/json.hpp>

namespace symboleo::loc
{

namespace
{

std::size_t bundle_loc(const FileMap & files)
{
  std::size_t n = 0;
  for (const auto & [_, text] : files) {
    n += count_loc(text);
  }
  return n;
}

std::string fmt1(double x)
{
  std::ostringstream os;
  os << std::fixed << std::setprecision(1) << x;
  return os.str();
}

ReportColumn column_for(const ReportInput & base, const ReportInput & in, bool is_base)
{
  ReportColumn c;
  c.label = in.label;
  c.sym_loc = count_loc(in.symboleo);
  c.sc_files = in.bundle.size();
  c.sc_loc = bundle_loc(in.bundle);
  if (!is_base) {
    c.sym_diff = diff_lines(base.symboleo, in.symboleo);
    c.sc_diff = diff_bundles(base.bundle, in.bundle).total;
    c.pct_changed = pct_changed(c.sc_diff, c.sc_loc);
  }
  c.ratio = c.sym_loc == 0 ? 0.0 : round1(static_cast<double>(c.sc_loc) / static_cast<double>(c.sym_loc));
  return c;
}

struct Row
{
  const char * name;
  std::string (*cell)(const ReportColumn &);
};

const Row kRows[] = {
  {"symboleo_loc", [](const ReportColumn & c) { return std::to_string(c.sym_loc); }},
  {"symboleo_added", [](const ReportColumn & c) { return std::to_string(c.sym_diff.added); }},
  {"symboleo_modified", [](const ReportColumn & c) { return std::to_string(c.sym_diff.modified); }},
  {"symboleo_deleted", [](const ReportColumn & c) { return std::to_string(c.sym_diff.deleted); }},
  {"sc_files", [](const ReportColumn & c) { return std::to_string(c.sc_files); }},
  {"sc_loc", [](const ReportColumn & c) { return std::to_string(c.sc_loc); }},
  {"sc_added", [](const ReportColumn & c) { return std::to_string(c.sc_diff.added); }},
  {"sc_modified", [](const ReportColumn & c) { return std::to_string(c.sc_diff.modified); }},
  {"sc_deleted", [](const ReportColumn & c) { return std::to_string(c.sc_diff.deleted); }},
  {"pct_changed", [](const ReportColumn & c) { return fmt1(c.pct_changed); }},
  {"sc_to_symboleo_ratio", [](const ReportColumn & c) { return fmt1(c.ratio); }},
};

}  // namespace

double round1(double x)
{
  return std::round(x * 10.0) / 10.0;
}

double pct_changed(const DiffStat & d, std::size_t refined_loc)
{
  if (refined_loc == 0) {
    return 0.0;
  }
  return round1(100.0 * static_cast<double>(d.total()) / static_cast<double>(refined_loc));
}

LocReport build_report(const ReportInput & base, const std::vector<ReportInput> & refined)
{
  LocReport r;
  r.columns.push_back(column_for(base, base, true));
  for (const auto & in : refined) {
    r.columns.push_back(column_for(base, in, false));
  }
  return r;
}

std::string to_csv(const LocReport & r)
{
  std::ostringstream os;
  os << "metric";
  for (const auto & c : r.columns) {
    os << ',' << c.label;
  }
  os << '\n';
  for (const auto & row : kRows) {
    os << row.name;
    for (const auto & c : r.columns) {
      os << ',' << row.cell(c);
    }
    os << '\n';
  }
  return os.str();
}

std::string to_text(const LocReport & r)
{
  std::size_t name_w = 0;
  for (const auto & row : kRows) {
    name_w = std::max(name_w, std::string{row.name}.size());
  }
  std::ostringstream os;
  os << std::left << std::setw(static_cast<int>(name_w)) << "" ;
  for (const auto & c : r.columns) {
    os << "  " << std::right << std::setw(8) << c.label;
  }
  os << '\n';
  for (const auto & row : kRows) {
    os << std::left << std::setw(static_cast<int>(name_w)) << row.name;
    for (const auto & c : r.columns) {
      os << "  " << std::right << std::setw(8) << row.cell(c);
    }
    os << '\n';
  }
  return os.str();
}

void to_json(nlohmann::json & j, const LocReport & r)
{
  auto columns = nlohmann::json::array();
  for (const auto & c : r.columns) {
    columns.push_back({
      {"label", c.label},
      {"symboleo", {{"loc", c.sym_loc}, {"diff", c.sym_diff}}},
      {"sc", {{"files", c.sc_files}, {"loc", c.sc_loc}, {"diff", c.sc_diff}}},
      {"pctChanged", c.pct_changed},
      {"ratio", c.ratio},
    });
  }
  j = {{"columns", std::move(columns)}};
}

}  // namespace symboleo::loc
