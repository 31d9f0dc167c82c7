#include "symboleo/common/diagnostic.hpp"

#include <algorithm>
#include <array>
#include <tuple>
#include <utility>

#include <nlohmann/json.hpp>

namespace symboleo
{

std::string_view describe_code(std::string_view code)
{
  static constexpr std::array<std::pair<std::string_view, std::string_view>, 28> kRegistry{{
    {codes::kSyntax, "syntax error"},
    {codes::kDuplicateId, "duplicate identifier"},
    {codes::kSameParty, "the same party appears on both sides of a norm"},
    {codes::kUnresolved, "unresolved reference"},
    {codes::kKindMismatch, "kind or category mismatch"},
    {codes::kInvalidInterval, "inverted interval or non-positive duration"},
    {codes::kEmptyInterval, "empty interval (start equals end)"},
    {codes::kUnmappedParameter, "template parameter not mapped to the specification"},
    {codes::kSlotMissingObligation, "slot bound to a missing obligation"},
    {codes::kParameterKindMismatch, "template and specification parameter kinds differ"},
    {codes::kMissingValue, "missing parameter value"},
    {codes::kLiteralKindMismatch, "literal does not match the parameter kind"},
    {codes::kDuplicateRefinement, "slot already carries a refinement of this class"},
    {codes::kTemplateInvalid, "malformed template"},
    {codes::kUnknownSlot, "unknown slot"},
    {codes::kNotInCnl, "text is not in the controlled language"},
    {codes::kUnresolvablePhrase, "event phrase element cannot be resolved"},
    {codes::kRuleInapplicable, "refinement rule does not apply to the bound obligation"},
    {codes::kSlotAlreadyRefined, "slot already refined with the same form class"},
    {codes::kConditionalOnTriggered, "conditional refinement on an obligation with a non-trivial trigger"},
    {codes::kInvalidSpec, "specification has errors; generation refused"},
    {codes::kBadParameterValue, "missing or ill-kinded parameter value"},
    {codes::kTimeRegression, "time moves backwards"},
    {codes::kUnknownEvent, "unknown event"},
    {codes::kPowerNotInEffect, "power is not in effect"},
    {codes::kBadOccurrence, "event occurrence attributes do not match the declaration"},
    {codes::kNotFound, "resource not found"},
    {codes::kBadRequest, "malformed request"},
  }};
  for (const auto & [c, text] : kRegistry) {
    if (c == code) {
      return text;
    }
  }
  return {};
}

bool has_errors(const std::vector<Diagnostic> & diagnostics)
{
  return std::any_of(diagnostics.begin(), diagnostics.end(), [](const Diagnostic & d) {
    return d.severity == Severity::Error;
  });
}

void sort_diagnostics(std::vector<Diagnostic> & diagnostics)
{
  std::stable_sort(
    diagnostics.begin(), diagnostics.end(), [](const Diagnostic & a, const Diagnostic & b) {
      return std::tie(a.span, a.code, a.message) < std::tie(b.span, b.code, b.message);
    });
}

void to_json(nlohmann::json & j, const Position & p) { j = {{"line", p.line}, {"col", p.col}}; }

void to_json(nlohmann::json & j, const Diagnostic & d)
{
  j = nlohmann::json{
    {"code", d.code},
    {"severity", d.severity == Severity::Error ? "error" : "warning"},
    {"range", {{"start", d.span.start}, {"end", d.span.end}}},
    {"message", d.message},
  };
}

}  // namespace symboleo
