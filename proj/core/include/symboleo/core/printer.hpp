#pragma once

#include <string>

#include "symboleo/core/ast.hpp"

namespace symboleo
{

// Canonical text: fixed section order, two-space indentation, one
// declaration or statement per line, a blank line between sections, LF line
// endings. parse(print(s)) reproduces s.
std::string print(const SymboleoSpec & spec);

std::string print(const Prop & p);
std::string print(const Value & v);
std::string print(const Interval & i);
std::string print(const PowerAction & a);
std::string print(const Duration & d);
std::string format_number(double n);

}  // namespace symboleo
