#pragma once

#include <compare>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace symboleo
{

enum class Severity { Error, Warning };

// 1-based line and column. Columns count Unicode code points.
struct Position
{
  int line = 1;
  int col = 1;

  auto operator<=>(const Position &) const = default;
};

struct Span
{
  Position start;
  Position end;

  auto operator<=>(const Span &) const = default;
};

struct Diagnostic
{
  Severity severity = Severity::Error;
  std::string code;
  Span span;
  std::string message;

  bool operator==(const Diagnostic &) const = default;
};

// Documented code registry. Codes are stable; messages are not.
namespace codes
{
inline constexpr std::string_view kSyntax = "E001";
inline constexpr std::string_view kDuplicateId = "E101";
inline constexpr std::string_view kSameParty = "E102";
inline constexpr std::string_view kUnresolved = "E201";
inline constexpr std::string_view kKindMismatch = "E301";
inline constexpr std::string_view kInvalidInterval = "E302";
inline constexpr std::string_view kEmptyInterval = "W401";

inline constexpr std::string_view kUnmappedParameter = "E501";
inline constexpr std::string_view kSlotMissingObligation = "E502";
inline constexpr std::string_view kParameterKindMismatch = "E503";
inline constexpr std::string_view kMissingValue = "E504";
inline constexpr std::string_view kLiteralKindMismatch = "E505";
inline constexpr std::string_view kDuplicateRefinement = "E506";
inline constexpr std::string_view kTemplateInvalid = "E507";

inline constexpr std::string_view kUnknownSlot = "E601";
inline constexpr std::string_view kNotInCnl = "E602";
inline constexpr std::string_view kUnresolvablePhrase = "E603";
inline constexpr std::string_view kRuleInapplicable = "E604";
inline constexpr std::string_view kSlotAlreadyRefined = "E605";
inline constexpr std::string_view kConditionalOnTriggered = "E606";

inline constexpr std::string_view kInvalidSpec = "E701";

inline constexpr std::string_view kBadParameterValue = "E801";
inline constexpr std::string_view kTimeRegression = "E802";
inline constexpr std::string_view kUnknownEvent = "E803";
inline constexpr std::string_view kPowerNotInEffect = "E804";
inline constexpr std::string_view kBadOccurrence = "E805";

inline constexpr std::string_view kNotFound = "E404";
inline constexpr std::string_view kBadRequest = "E400";
}  // namespace codes

// One-line description of a registry code, or empty for unknown codes.
std::string_view describe_code(std::string_view code);

bool has_errors(const std::vector<Diagnostic> & diagnostics);

// Orders by span, then code, then message.
void sort_diagnostics(std::vector<Diagnostic> & diagnostics);

void to_json(nlohmann::json & j, const Diagnostic & d);
void to_json(nlohmann::json & j, const Position & p);

}  // namespace symboleo
