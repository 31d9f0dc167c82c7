#pragma once

// Controlled natural language for refining template slots:
//
//   before DATE | after DATE | between DATE and DATE
//   within N UNIT of PHRASE | if PHRASE
//
//   DATE   := MonthName D, YYYY | [PLACEHOLDER]
//   UNIT   := day(s) | week(s) | month(s)
//   PHRASE := Subject verb-ing [Object]

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "symboleo/common/calendar.hpp"
#include "symboleo/common/diagnostic.hpp"
#include "symboleo/core/ast.hpp"
#include "symboleo/tmpl/template.hpp"

namespace symboleo::cnl
{

// A concrete date or a `[NAME]` placeholder that becomes a Date parameter.
struct CnlDate
{
  std::optional<Date> date;
  std::string placeholder;

  bool operator==(const CnlDate &) const = default;
};

struct EventPhrase
{
  std::string subject;  // as written
  std::string verb;     // gerund as written
  std::string object;   // empty when absent

  bool operator==(const EventPhrase &) const = default;
};

namespace form
{
struct Before
{
  CnlDate date;
  bool operator==(const Before &) const = default;
};
struct After
{
  CnlDate date;
  bool operator==(const After &) const = default;
};
struct Between
{
  CnlDate start;
  CnlDate end;
  bool operator==(const Between &) const = default;
};
struct WithinOf
{
  Duration duration;
  EventPhrase phrase;
  bool operator==(const WithinOf &) const = default;
};
struct If
{
  EventPhrase phrase;
  bool operator==(const If &) const = default;
};
}  // namespace form

using Form = std::variant<form::Before, form::After, form::Between, form::WithinOf, form::If>;

bool is_temporal(const Form & f);

struct CnlRefinement
{
  std::string slot;
  Form form;

  bool operator==(const CnlRefinement &) const = default;
};

// Canonical surface text ("between [START_DATE] and [END_DATE]").
std::string surface(const Form & f);

struct ParseCnlResult
{
  std::optional<CnlRefinement> refinement;
  std::vector<Diagnostic> diagnostics;
};

// E601 unknown slot, E602 text outside the grammar (with a nearest-keyword
// hint when the leading word is misspelled), E603 phrase that names an
// unknown party, verb or object. Diagnostic spans are 1-based columns into
// `text` on line 1.
ParseCnlResult parse_cnl(std::string_view text, const tmpl::TemplatePair & pair, std::string_view slot);

// ---- option tree ----------------------------------------------------------

struct OptionField
{
  std::string name;  // "date", "start", "end", "n", "unit", "subject", "verb", "object"
  std::string kind;  // "date" | "integer" | "choice"
  std::vector<std::string> choices;
  bool optional = false;
};

struct OptionChoice
{
  std::string keyword;
  std::string pattern;  // "between [DATE] and [DATE]"
  std::vector<OptionField> fields;
};

struct OptionTree
{
  std::string slot;
  std::string obligation;
  std::vector<OptionChoice> choices;
};

// Refinement forms still applicable to `slot`, with the vocabulary each
// field accepts. Throws Error(E601) for an unknown slot.
OptionTree available_options(const tmpl::TemplatePair & pair, std::string_view slot);

void to_json(nlohmann::json & j, const OptionTree & t);

// ---- event phrases --------------------------------------------------------

// Gerund of a base verb ("pay" -> "paying", "ship" -> "shipping").
std::string gerund(std::string_view verb);

// Base verb for a gerund if it belongs to the lexicon.
std::optional<std::string> verb_from_gerund(std::string_view word, const std::vector<std::string> & lexicon);

// Display form of a binding name in phrases ("buyer" -> "Buyer").
std::string display_name(std::string_view binding);

struct ResolvedEvent
{
  std::string binding;
  bool created = false;
  std::vector<DomainDecl> new_domain;
  std::vector<Binding> new_bindings;

  bool operator==(const ResolvedEvent &) const = default;
};

// Finds the event binding whose signature matches the phrase, or describes
// the declarations needed to add one. Throws Error(E603) when an element of
// the phrase does not resolve.
ResolvedEvent resolve_event_phrase(
  const EventPhrase & phrase, const SymboleoSpec & spec, const std::vector<std::string> & lexicon);

void to_json(nlohmann::json & j, const ResolvedEvent & r);

// Levenshtein distance, used for "did you mean" hints.
std::size_t edit_distance(std::string_view a, std::string_view b);

}  // namespace symboleo::cnl
