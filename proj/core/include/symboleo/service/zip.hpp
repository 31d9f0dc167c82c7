#pragma once

#include <filesystem>
#include <string>

#include "symboleo/codegen/generator.hpp"
#include "symboleo/loc/diff.hpp"

namespace symboleo::service
{

// Where the support library lands next to a generated bundle.
inline constexpr std::string_view kLibraryPath = "lib/symboleo-js-core.js";

// Bundle files plus the support library: exactly what `generate --out`
// writes and what the archive endpoint serves.
loc::FileMap bundle_tree(const codegen::GeneratedBundle & bundle);

// Store-only zip with entries in path order and a fixed 1980-01-01
// timestamp, so equal trees give equal bytes.
std::string make_zip(const loc::FileMap & files);

// Writes every file under `dir`, creating directories as needed.
void write_tree(const std::filesystem::path & dir, const loc::FileMap & files);

}  // namespace symboleo::service
