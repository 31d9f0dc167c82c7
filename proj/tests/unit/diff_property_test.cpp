// diff_lines against independent oracles on random line sequences.

#include <gtest/gtest.h>

#include <random>
#include <set>

#include "symboleo/loc/diff.hpp"

namespace symboleo::loc
{
namespace
{

using Lines = std::vector<std::string>;

// Prefix-table LCS, filled in the opposite direction from the implementation.
std::size_t lcs_length(const Lines & a, const Lines & b)
{
  std::vector<std::vector<std::size_t>> t(a.size() + 1, std::vector<std::size_t>(b.size() + 1, 0));
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      t[i][j] = a[i - 1] == b[j - 1] ? t[i - 1][j - 1] + 1 : std::max(t[i - 1][j], t[i][j - 1]);
    }
  }
  return t[a.size()][b.size()];
}

// Naive exponential LCS for tiny inputs.
std::size_t lcs_naive(const Lines & a, std::size_t i, const Lines & b, std::size_t j)
{
  if (i == a.size() || j == b.size()) {
    return 0;
  }
  if (a[i] == b[j]) {
    return 1 + lcs_naive(a, i + 1, b, j + 1);
  }
  return std::max(lcs_naive(a, i + 1, b, j), lcs_naive(a, i, b, j + 1));
}

// Every optimal alignment, scored with the gap-pairing rule.
void all_alignments(
  const Lines & a, const Lines & b, std::size_t i, std::size_t j, std::size_t remaining, std::size_t gd,
  std::size_t gi, DiffStat acc, std::set<std::tuple<std::size_t, std::size_t, std::size_t>> & out)
{
  auto closed = [&](DiffStat s) {
    const auto p = std::min(gd, gi);
    s.modified += p;
    s.deleted += gd - p;
    s.added += gi - p;
    return s;
  };
  if (i == a.size() && j == b.size()) {
    if (remaining == 0) {
      const auto s = closed(acc);
      out.insert({s.added, s.modified, s.deleted});
    }
    return;
  }
  if (i < a.size() && j < b.size() && a[i] == b[j] && remaining > 0 &&
      lcs_naive(a, i + 1, b, j + 1) == remaining - 1) {
    all_alignments(a, b, i + 1, j + 1, remaining - 1, 0, 0, closed(acc), out);
  }
  if (i < a.size() && lcs_naive(a, i + 1, b, j) == remaining) {
    all_alignments(a, b, i + 1, j, remaining, gd + 1, gi, acc, out);
  }
  if (j < b.size() && lcs_naive(a, i, b, j + 1) == remaining) {
    all_alignments(a, b, i, j + 1, remaining, gd, gi + 1, acc, out);
  }
}

Lines random_lines(std::mt19937 & rng, std::size_t max_len, int alphabet)
{
  Lines out(rng() % (max_len + 1));
  for (auto & l : out) {
    l = "l" + std::to_string(rng() % static_cast<unsigned>(alphabet));
  }
  return out;
}

TEST(diff_property, counts_match_lcs_oracle)
{
  std::mt19937 rng{42};
  for (int c = 0; c < 500; ++c) {
    const bool tiny = c % 2 == 0;
    const auto a = random_lines(rng, tiny ? 7 : 50, tiny ? 3 : 6);
    const auto b = random_lines(rng, tiny ? 7 : 50, tiny ? 3 : 6);
    const auto d = diff_line_vectors(a, b);
    const auto l = lcs_length(a, b);
    EXPECT_EQ(d.modified + d.deleted, a.size() - l) << c;
    EXPECT_EQ(d.modified + d.added, b.size() - l) << c;
    if (tiny) {
      ASSERT_EQ(lcs_naive(a, 0, b, 0), l);
      std::set<std::tuple<std::size_t, std::size_t, std::size_t>> possible;
      all_alignments(a, b, 0, 0, l, 0, 0, {}, possible);
      EXPECT_TRUE(possible.count({d.added, d.modified, d.deleted}) == 1) << c;
    }
  }
}

TEST(diff_property, identity_and_pure_edits)
{
  std::mt19937 rng{9};
  for (int c = 0; c < 200; ++c) {
    auto a = random_lines(rng, 50, 1000);
    EXPECT_EQ(diff_line_vectors(a, a), (DiffStat{0, 0, 0}));
    auto grown = a;
    const std::size_t k = rng() % 5;
    for (std::size_t i = 0; i < k; ++i) {
      grown.insert(grown.begin() + static_cast<long>(rng() % (grown.size() + 1)), "new" + std::to_string(i));
    }
    EXPECT_EQ(diff_line_vectors(a, grown), (DiffStat{k, 0, 0}));
    EXPECT_EQ(diff_line_vectors(grown, a), (DiffStat{0, 0, k}));
  }
}

// Tie-breaking makes the gap split order-dependent, but both directions keep
// the same LCS, so unmatched totals per side swap exactly.
TEST(diff_property, swapping_sides_swaps_unmatched_totals)
{
  std::mt19937 rng{1234};
  for (int c = 0; c < 500; ++c) {
    const auto a = random_lines(rng, 30, 5);
    const auto b = random_lines(rng, 30, 5);
    const auto ab = diff_line_vectors(a, b);
    const auto ba = diff_line_vectors(b, a);
    EXPECT_EQ(ab.added + ab.modified, ba.deleted + ba.modified) << c;
    EXPECT_EQ(ab.deleted + ab.modified, ba.added + ba.modified) << c;
    EXPECT_EQ(ab.added + a.size(), ab.deleted + b.size()) << c;
  }
}

}  // namespace
}  // namespace symboleo::loc
