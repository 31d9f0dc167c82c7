#include "symboleo/runtime/scenario.hpp"

#include <sstream>

#include "symboleo/common/error.hpp"

namespace symboleo::runtime
{

namespace
{

using nlohmann::json;

std::string field(const json & op, const char * name)
{
  const auto it = op.find(name);
  if (it == op.end() || !it->is_string()) {
    throw Error(codes::kBadRequest, std::string{"operation needs a string \""} + name + "\"");
  }
  return it->get<std::string>();
}

Timestamp time_field(const json & op)
{
  const std::string s = field(op, "at");
  auto t = parse_timestamp(s);
  if (!t) {
    throw Error(codes::kBadRequest, "invalid timestamp '" + s + "'");
  }
  return *t;
}

std::string current_state(const Snapshot & s, const std::string & id)
{
  if (id == s.contract) {
    return std::string{to_string(s.state)};
  }
  for (const auto & [k, v] : s.obligations) {
    if (k == id) {
      return std::string{to_string(v)};
    }
  }
  for (const auto & [k, v] : s.powers) {
    if (k == id) {
      return std::string{to_string(v)};
    }
  }
  return "absent";
}

}  // namespace

std::vector<ScenarioOp> parse_scenario(std::string_view jsonl)
{
  std::vector<ScenarioOp> ops;
  std::istringstream in{std::string{jsonl}};
  std::string line;
  for (std::size_t n = 1; std::getline(in, line); ++n) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') {
      continue;
    }
    json op = json::parse(line, nullptr, false);
    if (op.is_discarded() || !op.is_object()) {
      throw Error(codes::kBadRequest, "line " + std::to_string(n) + ": not a JSON object");
    }
    const std::string kind = op.value("op", "");
    if (kind != "event" && kind != "tick" && kind != "exert" && kind != "expect") {
      throw Error(codes::kBadRequest, "line " + std::to_string(n) + ": unknown op '" + kind + "'");
    }
    ops.push_back({n, std::move(op)});
  }
  return ops;
}

TransitionReport apply_op(ContractInstance & inst, const json & op)
{
  const std::string kind = op.value("op", "");
  if (kind == "event") {
    return inst.submit_event(field(op, "event"), time_field(op), op.value("attributes", json::object()));
  }
  if (kind == "tick") {
    return inst.tick(time_field(op));
  }
  if (kind == "exert") {
    return inst.exert_power(field(op, "power"));
  }
  if (kind == "expect") {
    const std::string id = field(op, "id");
    const std::string want = field(op, "state");
    const std::string got = current_state(inst.status(), id);
    if (got != want) {
      throw Error(codes::kBadRequest, "expected " + id + " to be " + want + ", found " + got);
    }
    return {};
  }
  throw Error(codes::kBadRequest, "unknown op '" + kind + "'");
}

ScenarioResult run_scenario(ContractInstance & inst, const std::vector<ScenarioOp> & ops)
{
  ScenarioResult r;
  for (const auto & o : ops) {
    ScenarioStep step;
    step.line = o.line;
    step.op = o.op;
    const std::string expected = o.op.value("expectError", "");
    try {
      step.report = apply_op(inst, o.op);
      if (!expected.empty()) {
        step.ok = false;
        step.error = "expected error " + expected + " but the operation succeeded";
      }
    } catch (const Error & e) {
      step.error_code = e.code();
      step.error = e.what();
      step.ok = e.code() == expected;
    }
    r.ok = r.ok && step.ok;
    r.steps.push_back(std::move(step));
    if (!r.ok) {
      break;
    }
  }
  r.final = inst.status();
  return r;
}

json to_json(const ScenarioResult & r)
{
  json steps = json::array();
  for (const auto & s : r.steps) {
    json j = {{"line", s.line}, {"op", s.op}, {"ok", s.ok}, {"transitions", to_json(s.report)}};
    if (!s.error.empty()) {
      j["error"] = {{"code", s.error_code}, {"message", s.error}};
    }
    steps.push_back(std::move(j));
  }
  return {{"ok", r.ok}, {"steps", steps}, {"final", to_json(r.final)}};
}

}  // namespace symboleo::runtime
