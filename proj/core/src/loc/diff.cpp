#include "symboleo/loc/diff.hpp"

#include <algorithm>
#include <cstdint>
#include <set>

#include <nlohmann/json.hpp>

namespace symboleo::loc
{

DiffStat & DiffStat::operator+=(const DiffStat & o)
{
  added += o.added;
  modified += o.modified;
  deleted += o.deleted;
  return *this;
}

std::vector<std::string> significant_lines(std::string_view text)
{
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) {
      end = text.size();
    }
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') {
      line.remove_suffix(1);
    }
    if (line.find_first_not_of(" \t\f\v") != std::string_view::npos) {
      out.emplace_back(line);
    }
    start = end + 1;
  }
  return out;
}

std::size_t count_loc(std::string_view text)
{
  return significant_lines(text).size();
}

DiffStat diff_line_vectors(const std::vector<std::string> & a, const std::vector<std::string> & b)
{
  const std::size_t n = a.size();
  const std::size_t m = b.size();
  // lcs[i][j] = LCS length of a[i..] and b[j..]
  std::vector<std::vector<std::uint32_t>> lcs(n + 1, std::vector<std::uint32_t>(m + 1, 0));
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t j = m; j-- > 0;) {
      lcs[i][j] = a[i] == b[j] ? lcs[i + 1][j + 1] + 1 : std::max(lcs[i + 1][j], lcs[i][j + 1]);
    }
  }

  DiffStat stat;
  std::size_t gap_del = 0;
  std::size_t gap_ins = 0;
  auto close_gap = [&] {
    const std::size_t paired = std::min(gap_del, gap_ins);
    stat.modified += paired;
    stat.deleted += gap_del - paired;
    stat.added += gap_ins - paired;
    gap_del = gap_ins = 0;
  };

  std::size_t i = 0;
  std::size_t j = 0;
  while (i < n || j < m) {
    if (i < n && j < m && a[i] == b[j]) {
      close_gap();
      ++i;
      ++j;
    } else if (j == m || (i < n && lcs[i + 1][j] >= lcs[i][j + 1])) {
      ++gap_del;
      ++i;
    } else {
      ++gap_ins;
      ++j;
    }
  }
  close_gap();
  return stat;
}

DiffStat diff_lines(std::string_view before, std::string_view after)
{
  return diff_line_vectors(significant_lines(before), significant_lines(after));
}

BundleDiff diff_bundles(const FileMap & before, const FileMap & after)
{
  std::set<std::string> paths;
  for (const auto & [p, _] : before) {
    paths.insert(p);
  }
  for (const auto & [p, _] : after) {
    paths.insert(p);
  }
  BundleDiff out;
  for (const auto & p : paths) {
    auto b = before.find(p);
    auto a = after.find(p);
    const std::string_view old_text = b == before.end() ? std::string_view{} : b->second;
    const std::string_view new_text = a == after.end() ? std::string_view{} : a->second;
    FileDiff fd{p, diff_lines(old_text, new_text)};
    out.total += fd.stat;
    out.files.push_back(std::move(fd));
  }
  return out;
}

void to_json(nlohmann::json & j, const DiffStat & d)
{
  j = {{"added", d.added}, {"modified", d.modified}, {"deleted", d.deleted}};
}

}  // namespace symboleo::loc
