#pragma once

// Machine-readable description of the obligation/power state machines a
// generated bundle implements. Propositions are JSON trees:
//
//   {"op":"true"} {"op":"false"}
//   {"op":"happens","event":E}
//   {"op":"happensBefore"|"happensAfter","event":E,"time":V}
//   {"op":"happensWithin","event":E,"interval":I}
//   {"op":"violated"|"fulfilled","obligation":O}
//   {"op":"attr","event":E,"attribute":A,"cmp":"<","value":V}
//   {"op":"not","arg":P} {"op":"and"|"or","args":[P,P]}
//
//   V := {"param":name} | {"number":n} | {"string":s} | {"date":"YYYY-MM-DD"}
//   I := {"kind":"absolute","start":V,"end":V}
//      | {"kind":"relative","anchor":E,"magnitude":n,"unit":"days"|"weeks"|"months"}

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "symboleo/core/ast.hpp"

namespace symboleo::codegen
{

inline constexpr std::string_view kManifestSchema = "symboleo-sc-manifest/1";

struct ManifestEntity
{
  std::string name;
  std::string type;
  std::vector<std::string> attributes;  // declared attributes of the type
  nlohmann::json assignments = nlohmann::json::object();

  bool operator==(const ManifestEntity &) const = default;
};

struct ManifestObligation
{
  std::string id;
  std::string debtor;
  std::string creditor;
  nlohmann::json trigger;
  nlohmann::json consequent;

  bool operator==(const ManifestObligation &) const = default;
};

struct ManifestPower
{
  std::string id;
  std::string holder;
  std::string counterparty;
  nlohmann::json trigger;
  // {"kind":"suspend"|"resume","targets":[...]} | {"kind":"terminate"}
  // | {"kind":"impose","obligation":<obligation object>}
  nlohmann::json action;

  bool operator==(const ManifestPower &) const = default;
};

struct StateMachineManifest
{
  std::string contract;
  std::vector<std::pair<std::string, std::string>> parameters;  // name, kind
  std::vector<ManifestEntity> roles;
  std::vector<ManifestEntity> assets;
  std::vector<ManifestEntity> events;
  std::vector<ManifestObligation> obligations;
  std::vector<ManifestPower> powers;

  bool operator==(const StateMachineManifest &) const = default;
};

// Built from the spec AST; named windows are inlined as relative intervals.
StateMachineManifest manifest_from_spec(const SymboleoSpec & spec);

nlohmann::json value_to_json(const Value & v);
nlohmann::json prop_to_json(const Prop & p, const SymboleoSpec & spec);

nlohmann::json to_json(const StateMachineManifest & m);
nlohmann::json obligation_to_json(const ManifestObligation & o);
// Throws Error(E400) on a document that does not follow the schema.
StateMachineManifest manifest_from_json(const nlohmann::json & j);

}  // namespace symboleo::codegen
