#pragma once

// Per-refinement size and change table comparing specs and generated code.

#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "symboleo/loc/diff.hpp"

namespace symboleo::loc
{

struct ReportInput
{
  std::string label;
  std::string symboleo;  // canonical spec text
  FileMap bundle;        // generated smart-contract sources
};

struct ReportColumn
{
  std::string label;
  std::size_t sym_loc = 0;
  DiffStat sym_diff;
  std::size_t sc_files = 0;
  std::size_t sc_loc = 0;
  DiffStat sc_diff;
  double pct_changed = 0.0;  // one decimal
  double ratio = 0.0;        // SC LOC / Symboleo LOC, one decimal
};

struct LocReport
{
  std::vector<ReportColumn> columns;  // base first, then refinements in order
};

// Rounds half away from zero to one decimal.
double round1(double x);

// 100 * (added + modified + deleted) / refined SC LOC, rounded to one decimal.
double pct_changed(const DiffStat & d, std::size_t refined_loc);

LocReport build_report(const ReportInput & base, const std::vector<ReportInput> & refined);

// Metrics as rows, one column per spec: `metric,Init,R1,...`.
std::string to_csv(const LocReport & r);
std::string to_text(const LocReport & r);
// {"columns": [...]}, base first.
void to_json(nlohmann::json & j, const LocReport & r);

}  // namespace symboleo::loc
