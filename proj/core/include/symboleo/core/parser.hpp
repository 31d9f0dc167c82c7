#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "symboleo/common/diagnostic.hpp"
#include "symboleo/core/ast.hpp"

namespace symboleo
{

struct ParseResult
{
  std::optional<SymboleoSpec> spec;
  std::vector<Diagnostic> diagnostics;
};

// Parses a `.symboleo` source. Returns a spec only when no syntax error was
// found; semantic checks are left to validate(). Never throws.
ParseResult parse(std::string_view source);

// Like parse(), but always returns the best-effort tree built while
// recovering from syntax errors (statements that failed are dropped).
ParseResult parse_recovering(std::string_view source);

}  // namespace symboleo
