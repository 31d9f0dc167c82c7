#pragma once

// JSONL scenarios: one operation per line, replayed against a fresh
// instance.
//
//   {"op":"event","event":"evt_pay","at":"2024-03-15T10:00","attributes":{"amount":1500}}
//   {"op":"tick","at":"2024-04-01"}
//   {"op":"exert","power":"P_suspend"}
//   {"op":"expect","id":"O_pay","state":"Violated"}
//
// Any operation may carry "expectError":"E804"; the step then passes only if
// it fails with that code.

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "symboleo/runtime/instance.hpp"

namespace symboleo::runtime
{

struct ScenarioStep
{
  std::size_t line = 0;
  nlohmann::json op;
  TransitionReport report;
  std::string error_code;
  std::string error;
  bool ok = true;
};

struct ScenarioResult
{
  std::vector<ScenarioStep> steps;
  Snapshot final;
  bool ok = true;  // every step passed
};

struct ScenarioOp
{
  std::size_t line = 0;
  nlohmann::json op;
};

// Skips blank lines and lines starting with '#'. Throws Error(E400) on bad
// JSON or an unknown op.
std::vector<ScenarioOp> parse_scenario(std::string_view jsonl);

// Applies one op. Throws the runtime's coded errors; "expect" throws E400
// when the state differs.
TransitionReport apply_op(ContractInstance & inst, const nlohmann::json & op);

// Replays until the first failing step.
ScenarioResult run_scenario(ContractInstance & inst, const std::vector<ScenarioOp> & ops);

nlohmann::json to_json(const ScenarioResult & r);

}  // namespace symboleo::runtime
