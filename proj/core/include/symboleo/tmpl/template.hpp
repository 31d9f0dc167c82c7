#pragma once

// Contract templates: natural-language clauses with `<param>` placeholders
// and `[Pk]` refinement-slot markers, paired with a Symboleo spec.

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "symboleo/common/diagnostic.hpp"
#include "symboleo/core/ast.hpp"

namespace symboleo::tmpl
{

struct TemplateParameter
{
  std::string name;
  ParamKind kind = ParamKind::String;

  bool operator==(const TemplateParameter &) const = default;
};

struct RefinementSlot
{
  std::string id;           // "P1"
  std::size_t clause = 0;   // 0-based clause index
  std::size_t anchor = 0;   // byte offset of the `[id]` marker in that clause
  std::string obligation;   // spec obligation the slot refines

  bool operator==(const RefinementSlot &) const = default;
};

struct ContractTemplate
{
  std::string name;
  std::string preamble;
  std::vector<std::string> clauses;
  std::vector<TemplateParameter> parameters;
  std::vector<RefinementSlot> slots;
  // Base verbs that controlled-language event phrases may use.
  std::vector<std::string> lexicon;

  const TemplateParameter * find_parameter(std::string_view name) const;
  const RefinementSlot * find_slot(std::string_view id) const;
  bool operator==(const ContractTemplate &) const = default;
};

std::vector<std::string> default_lexicon();

// Structural checks: placeholders declared, markers present at their
// anchors, slot ids unique. Codes E507.
std::vector<Diagnostic> check_template(const ContractTemplate & t);

// Throws Error(E507) on malformed JSON or a template failing check_template.
ContractTemplate template_from_json(const nlohmann::json & j);
nlohmann::json to_json(const ContractTemplate & t);

// Placeholder names in order of first appearance.
std::vector<std::string> placeholders_in(std::string_view text);

// What has been refined on each slot so far.
struct SlotState
{
  bool temporal = false;
  bool conditional = false;

  bool operator==(const SlotState &) const = default;
};

struct TemplatePair
{
  ContractTemplate tmpl;
  SymboleoSpec spec;
  // template parameter -> spec parameter
  std::map<std::string, std::string> param_map;
  std::map<std::string, SlotState> slots;

  bool operator==(const TemplatePair &) const = default;
};

struct BindResult
{
  std::optional<TemplatePair> pair;
  std::vector<Diagnostic> diagnostics;
};

// Maps each template parameter to the spec parameter of the same name.
std::map<std::string, std::string> identity_map(const ContractTemplate & t);

// Checks E501/E502/E503 (and E507 for the template itself); the pair is
// returned only when no error was found.
BindResult bind_pair(
  const ContractTemplate & t, const SymboleoSpec & spec,
  const std::map<std::string, std::string> & param_map);

// Marks a slot refined. Throws Error(E506) if that kind of refinement was
// already applied to it, E601 for an unknown slot.
void record_refinement(TemplatePair & pair, std::string_view slot, bool temporal);

// Inserts `adjunct` immediately before the slot's marker (separated by one
// space) and shifts anchors of later markers in the same clause.
void insert_adjunct(ContractTemplate & t, std::string_view slot, std::string_view adjunct);

// Template text with placeholders kept and slot markers removed.
std::string render_template(const ContractTemplate & t);

// Substitutes literal values (keyed by template parameter name). Throws
// Error(E504) for a missing value, E505 for a literal of the wrong kind.
std::string instantiate(const ContractTemplate & t, const std::map<std::string, std::string> & values);

// True when `literal` is acceptable for a parameter of `kind`.
bool literal_matches(ParamKind kind, std::string_view literal);

}  // namespace symboleo::tmpl
