#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <string_view>

#include "symboleo/codegen/manifest.hpp"
#include "symboleo/core/ast.hpp"
#include "symboleo/loc/diff.hpp"

namespace symboleo::codegen
{

inline constexpr std::string_view kGeneratorName = "symboleo-sc";
inline constexpr std::string_view kGeneratorVersion = "0.1.0";

struct LocCount
{
  std::map<std::string, std::size_t> per_file;
  std::size_t total = 0;
};

struct GeneratedBundle
{
  std::string contract;
  // path -> text. Layout: events/<Type>.js, roles/<Type>.js,
  // assets/<Type>.js, router.js, contract.js, manifest.json.
  loc::FileMap files;
  StateMachineManifest manifest;

  std::size_t file_count() const { return files.size(); }
};

// Throws Error(E701) when validate(spec) reports an error. Output is a pure
// function of the spec.
GeneratedBundle generate(const SymboleoSpec & spec);

LocCount count_loc(const GeneratedBundle & bundle);

// Support library the generated code requires (`symboleo-js-core`). Shipped
// next to a bundle, never counted as part of it.
std::string_view runtime_library_js();

// ---- emitters (one per file kind) -----------------------------------------

std::string emit_type_class(const SymboleoSpec & spec, const DomainDecl & decl);
std::string emit_router(const SymboleoSpec & spec);
std::string emit_contract(const SymboleoSpec & spec);

}  // namespace symboleo::codegen
