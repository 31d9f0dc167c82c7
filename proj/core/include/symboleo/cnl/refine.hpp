#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "symboleo/cnl/cnl.hpp"
#include "symboleo/loc/diff.hpp"
#include "symboleo/tmpl/template.hpp"

namespace symboleo::cnl
{

struct RefinementResult
{
  tmpl::TemplatePair pair;
  std::string template_text;  // refined template, markers stripped
  loc::DiffStat spec_delta;   // canonical text of input vs output spec
  std::vector<ResolvedEvent> resolved_events;
};

// Rewrites the slot's obligation and template clause:
//   before/after/between  -> consequent Happens(e) gets a time bound
//   within N UNIT of X    -> consequent bound to a window anchored on X
//   if X                  -> trigger `true` becomes Happens(X)
// Throws Error: E601 unknown slot, E603 phrase, E604 rule does not apply,
// E605 slot already refined that way, E606 trigger already set.
RefinementResult apply_refinement(const tmpl::TemplatePair & pair, const CnlRefinement & r);

// One `P<k>: <cnl text>` per line; blank lines and `#` comments ignored.
struct ScriptLine
{
  std::string slot;
  std::string text;
  int line = 0;
};

// Throws Error(E602) for a line without a `slot:` prefix.
std::vector<ScriptLine> parse_script(std::string_view script);

// Parses and applies each line in order. CNL diagnostics are raised as
// Error with the first diagnostic's code and message.
RefinementResult apply_script(const tmpl::TemplatePair & pair, const std::vector<ScriptLine> & lines);

}  // namespace symboleo::cnl
