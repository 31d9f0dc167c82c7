#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "symboleo/common/diagnostic.hpp"

namespace symboleo
{

// Identifiers and keywords valid at `cursor` (1-based line/col), filtered by
// the identifier prefix left of the cursor and sorted. Returns an empty list
// for an unrecognized context or an out-of-range cursor.
std::vector<std::string> complete(std::string_view source, Position cursor);

}  // namespace symboleo
