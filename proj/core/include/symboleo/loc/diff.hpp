#pragma once

// Line-level change accounting between two texts or two file sets.

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace symboleo::loc
{

struct DiffStat
{
  std::size_t added = 0;
  std::size_t modified = 0;
  std::size_t deleted = 0;

  std::size_t total() const { return added + modified + deleted; }
  DiffStat & operator+=(const DiffStat & o);
  bool operator==(const DiffStat &) const = default;
};

// Non-blank lines (whitespace-only lines are blank). CR before LF is ignored.
std::vector<std::string> significant_lines(std::string_view text);
std::size_t count_loc(std::string_view text);

// Aligns the non-blank lines of both texts on a longest common subsequence.
// Inside each gap between aligned lines, min(deleted, inserted) pairs count
// as modified and the rest as added or deleted. Ties in the alignment are
// broken toward consuming `before` first, walking front to back.
DiffStat diff_lines(std::string_view before, std::string_view after);
DiffStat diff_line_vectors(const std::vector<std::string> & before, const std::vector<std::string> & after);

using FileMap = std::map<std::string, std::string>;

struct FileDiff
{
  std::string path;
  DiffStat stat;
};

struct BundleDiff
{
  DiffStat total;
  std::vector<FileDiff> files;  // sorted by path; unchanged files included
};

// Files only in `after` count as fully added, files only in `before` as
// fully deleted.
BundleDiff diff_bundles(const FileMap & before, const FileMap & after);

void to_json(nlohmann::json & j, const DiffStat & d);

}  // namespace symboleo::loc
