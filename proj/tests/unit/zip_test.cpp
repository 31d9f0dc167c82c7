#include <gtest/gtest.h>

#include <cstdint>
#include <cstring>

#include <zlib.h>

#include "fixtures.hpp"
#include "symboleo/service/zip.hpp"

namespace symboleo::service
{
namespace
{

std::uint32_t u32(const std::string & s, std::size_t at)
{
  std::uint32_t v = 0;
  for (int i = 3; i >= 0; --i) {
    v = (v << 8) | static_cast<unsigned char>(s[at + static_cast<std::size_t>(i)]);
  }
  return v;
}

std::uint16_t u16(const std::string & s, std::size_t at)
{
  return static_cast<std::uint16_t>(
    static_cast<unsigned char>(s[at]) | (static_cast<unsigned char>(s[at + 1]) << 8));
}

// Minimal reader: walks the local headers of a stored archive.
loc::FileMap read_stored_zip(const std::string & z)
{
  loc::FileMap out;
  std::size_t at = 0;
  while (at + 30 <= z.size() && u32(z, at) == 0x04034b50) {
    EXPECT_EQ(u16(z, at + 8), 0) << "method must be stored";
    const auto crc = u32(z, at + 14);
    const auto size = u32(z, at + 18);
    const auto name_len = u16(z, at + 26);
    const auto extra_len = u16(z, at + 28);
    const std::string name = z.substr(at + 30, name_len);
    const std::string data = z.substr(at + 30 + name_len + extra_len, size);
    EXPECT_EQ(crc, crc32(0L, reinterpret_cast<const Bytef *>(data.data()), static_cast<uInt>(data.size()))) << name;
    out[name] = data;
    at += 30 + name_len + extra_len + size;
  }
  EXPECT_EQ(u32(z, at), 0x02014b50u) << "central directory follows the entries";
  const auto eocd = z.rfind(std::string("PK\x05\x06", 4));
  EXPECT_NE(eocd, std::string::npos);
  EXPECT_EQ(u16(z, eocd + 10), out.size());
  return out;
}

TEST(zip, archive_round_trips_bundle_tree)
{
  const auto tree = bundle_tree(codegen::generate(testing::te_spec()));
  EXPECT_TRUE(tree.count(std::string{kLibraryPath}));
  EXPECT_EQ(tree.size(), 10u);
  const auto z = make_zip(tree);
  EXPECT_EQ(read_stored_zip(z), tree);
  EXPECT_EQ(make_zip(tree), z);
}

TEST(zip, empty_archive)
{
  const auto z = make_zip({});
  EXPECT_EQ(z.size(), 22u);
  EXPECT_EQ(z.substr(0, 4), std::string("PK\x05\x06", 4));
}

TEST(zip, write_tree_creates_directories)
{
  const auto dir = std::filesystem::temp_directory_path() / "symboleo-zip-tree";
  std::filesystem::remove_all(dir);
  write_tree(dir, {{"a/b/c.js", "x\n"}, {"top.json", "{}\n"}});
  EXPECT_EQ(testing::slurp((dir / "a/b/c.js").string()), "x\n");
  EXPECT_EQ(testing::slurp((dir / "top.json").string()), "{}\n");
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace symboleo::service
