#include "symboleo/service/zip.hpp"

#include <cstdint>
#include <fstream>
#include <stdexcept>

#include <zlib.h>

namespace symboleo::service
{

namespace
{

// MS-DOS date for 1980-01-01, time 00:00.
constexpr std::uint16_t kDosDate = (0 << 9) | (1 << 5) | 1;
constexpr std::uint16_t kDosTime = 0;
constexpr std::uint16_t kUtf8Names = 0x0800;

void put16(std::string & out, std::uint16_t v)
{
  out += static_cast<char>(v & 0xff);
  out += static_cast<char>((v >> 8) & 0xff);
}

void put32(std::string & out, std::uint32_t v)
{
  put16(out, static_cast<std::uint16_t>(v & 0xffff));
  put16(out, static_cast<std::uint16_t>(v >> 16));
}

}  // namespace

loc::FileMap bundle_tree(const codegen::GeneratedBundle & bundle)
{
  loc::FileMap tree = bundle.files;
  tree.emplace(std::string{kLibraryPath}, std::string{codegen::runtime_library_js()});
  return tree;
}

std::string make_zip(const loc::FileMap & files)
{
  std::string out;
  std::string central;
  std::uint16_t count = 0;
  for (const auto & [path, data] : files) {
    const auto crc = static_cast<std::uint32_t>(
      crc32(0L, reinterpret_cast<const Bytef *>(data.data()), static_cast<uInt>(data.size())));
    const auto size = static_cast<std::uint32_t>(data.size());
    const auto name_len = static_cast<std::uint16_t>(path.size());
    const auto offset = static_cast<std::uint32_t>(out.size());

    put32(out, 0x04034b50);
    put16(out, 20);
    put16(out, kUtf8Names);
    put16(out, 0);  // stored
    put16(out, kDosTime);
    put16(out, kDosDate);
    put32(out, crc);
    put32(out, size);
    put32(out, size);
    put16(out, name_len);
    put16(out, 0);
    out += path;
    out += data;

    put32(central, 0x02014b50);
    put16(central, 20);
    put16(central, 20);
    put16(central, kUtf8Names);
    put16(central, 0);
    put16(central, kDosTime);
    put16(central, kDosDate);
    put32(central, crc);
    put32(central, size);
    put32(central, size);
    put16(central, name_len);
    put16(central, 0);
    put16(central, 0);
    put16(central, 0);
    put16(central, 0);
    put32(central, 0);
    put32(central, offset);
    central += path;
    ++count;
  }
  const auto cd_offset = static_cast<std::uint32_t>(out.size());
  out += central;
  put32(out, 0x06054b50);
  put16(out, 0);
  put16(out, 0);
  put16(out, count);
  put16(out, count);
  put32(out, static_cast<std::uint32_t>(central.size()));
  put32(out, cd_offset);
  put16(out, 0);
  return out;
}

void write_tree(const std::filesystem::path & dir, const loc::FileMap & files)
{
  for (const auto & [path, data] : files) {
    const auto target = dir / path;
    std::filesystem::create_directories(target.parent_path());
    std::ofstream f{target, std::ios::binary | std::ios::trunc};
    f << data;
    if (!f) {
      throw std::runtime_error("cannot write " + target.string());
    }
  }
}

}  // namespace symboleo::service
