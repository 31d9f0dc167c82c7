#pragma once

// A spec with every reference resolved to a table index and every parameter
// bound to a literal, ready for evaluation.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "symboleo/codegen/manifest.hpp"
#include "symboleo/common/calendar.hpp"
#include "symboleo/core/ast.hpp"

namespace symboleo::runtime
{

// Literal with the parameter it came from (empty for inline constants).
struct CValue
{
  AttrKind kind = AttrKind::Number;
  double number = 0.0;
  std::string text;
  Timestamp time{};
  std::string param;
};

struct CInterval
{
  bool relative = false;
  CValue start;  // absolute
  CValue end;
  int anchor = -1;  // relative: event index
  Duration duration;
};

struct CProp
{
  enum class Op { True, False, Happens, Before, After, Within, Violated, Fulfilled, Attr, Not, And, Or };

  Op op = Op::True;
  int event = -1;
  int obligation = -1;
  std::string attribute;
  AttrKind attribute_kind = AttrKind::Number;
  CmpOp cmp = CmpOp::Eq;
  CValue value;  // Before/After time point, Attr operand
  CInterval interval;
  std::vector<CProp> args;
};

struct CEntity
{
  std::string name;
  std::string type;
  std::vector<Attribute> attributes;
  std::map<std::string, CValue> assigned;

  const Attribute * find_attribute(std::string_view a) const;
};

struct CObligation
{
  std::string id;
  std::string debtor;
  std::string creditor;
  CProp trigger;
  CProp consequent;
  bool imposed = false;  // exists only once a power imposes it
};

struct CPower
{
  enum class Kind { Suspend, Resume, Terminate, Impose };

  std::string id;
  std::string holder;
  std::string counterparty;
  CProp trigger;
  Kind kind = Kind::Terminate;
  std::vector<int> targets;  // Suspend/Resume: obligation indices; Impose: the imposed one
};

struct CParameter
{
  std::string name;
  ParamKind kind = ParamKind::String;
  CValue value;
};

struct CompiledContract
{
  std::string name;
  std::vector<CParameter> parameters;
  std::vector<CEntity> roles;
  std::vector<CEntity> assets;
  std::vector<CEntity> events;
  // Declared obligations first, then imposable ones.
  std::vector<CObligation> obligations;
  std::vector<CPower> powers;
  // Closes the contract window when a `contract_end : Date` parameter exists.
  std::optional<Timestamp> contract_end;

  int event_index(std::string_view name) const;
  int obligation_index(std::string_view id) const;
  int power_index(std::string_view id) const;
};

// Parameter literals keyed by name. Throws Error(E801) naming the first
// parameter that is missing or not a literal of its kind, E701 for an
// invalid spec.
CompiledContract compile(const SymboleoSpec & spec, const std::map<std::string, std::string> & params);

// JSON object of name -> string or number.
std::map<std::string, std::string> params_from_json(const nlohmann::json & j);

// Parses a literal of `kind` ("$1,500.00", "5%", "March 31, 2024", ...).
std::optional<CValue> parse_literal(ParamKind kind, std::string_view text);

// The state machine as the runtime sees it, in manifest form.
codegen::StateMachineManifest describe(const CompiledContract & c);

nlohmann::json value_json(const CValue & v);

}  // namespace symboleo::runtime
