#pragma once

#include <vector>

#include "symboleo/common/diagnostic.hpp"
#include "symboleo/core/ast.hpp"

namespace symboleo
{

// Semantic checks over a parsed spec: unique identifiers, resolvable
// references, kind agreement, interval sanity. Returns an empty list iff
// every invariant holds. Output is sorted by span, then code.
std::vector<Diagnostic> validate(const SymboleoSpec & spec);

}  // namespace symboleo
