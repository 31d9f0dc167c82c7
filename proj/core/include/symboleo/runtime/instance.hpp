#pragma once

// One running contract: event log, clock and the lifecycle of every
// obligation and power. Thread-safe; concurrent operations serialize.

#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "symboleo/runtime/compiled.hpp"

namespace symboleo::runtime
{

enum class ObligationState { Created, InEffect, Suspended, Fulfilled, Violated };
enum class PowerState { Created, InEffect, Exerted, Expired };
enum class ContractState { InEffect, Fulfilled, Terminated };

std::string_view to_string(ObligationState s);
std::string_view to_string(PowerState s);
std::string_view to_string(ContractState s);

// Three-valued truth: Unknown means "not decided yet".
enum class Truth { False, True, Unknown };

using AttrValue = std::variant<double, std::string, Timestamp>;

struct Occurrence
{
  std::string event;
  Timestamp at{};
  std::map<std::string, AttrValue> attributes;
};

struct Transition
{
  std::string kind;  // "obligation", "power" or "contract"
  std::string id;
  std::string from;
  std::string to;
  std::string reason;
  Timestamp at{};
};

using TransitionReport = std::vector<Transition>;

struct Deadline
{
  std::string obligation;
  Timestamp at{};
};

struct Snapshot
{
  std::string contract;
  Timestamp clock{};
  ContractState state = ContractState::InEffect;
  std::vector<std::pair<std::string, ObligationState>> obligations;
  std::vector<std::pair<std::string, PowerState>> powers;
  std::vector<Deadline> deadlines;
  std::size_t log_size = 0;
};

class ContractInstance
{
public:
  // Starts the contract at `start`; obligations whose trigger already holds
  // enter InEffect.
  ContractInstance(std::shared_ptr<const CompiledContract> contract, Timestamp start);
  ContractInstance(const ContractInstance & other);
  ContractInstance & operator=(const ContractInstance &) = delete;

  // Advances the clock to `occ.at`, then records the occurrence.
  // E803 unknown event, E802 time regression, E805 bad attributes.
  TransitionReport submit_event(Occurrence occ);
  // Attribute values from JSON (numbers, strings, ISO dates).
  TransitionReport submit_event(const std::string & event, Timestamp at, const nlohmann::json & attributes);

  // E802 when `to` is earlier than the clock.
  TransitionReport tick(Timestamp to);

  // E804 unless the power is InEffect in an active contract.
  TransitionReport exert_power(std::string_view id);

  Snapshot status() const;
  std::vector<Occurrence> log() const;
  const TransitionReport & initial_report() const { return initial_; }
  const CompiledContract & contract() const { return *contract_; }

  Truth evaluate(const CProp & p) const;  // at the current state, for tests

private:
  struct State
  {
    Timestamp clock{};
    ContractState contract = ContractState::InEffect;
    std::vector<ObligationState> obligations;
    std::vector<bool> present;
    std::vector<PowerState> powers;
    std::vector<Occurrence> log;
  };

  Truth eval(const CProp & p) const;
  bool closed() const;
  std::optional<Timestamp> deadline_of(const CProp & p) const;
  void move_obligation(std::size_t i, ObligationState to, std::string reason, TransitionReport & r);
  void move_power(std::size_t i, PowerState to, std::string reason, TransitionReport & r);
  void move_contract(ContractState to, std::string reason, TransitionReport & r);
  void advance(Timestamp to, TransitionReport & r);
  void settle(TransitionReport & r);

  std::shared_ptr<const CompiledContract> contract_;
  State s_;
  TransitionReport initial_;
  mutable std::shared_mutex mu_;
};

nlohmann::json to_json(const Transition & t);
nlohmann::json to_json(const TransitionReport & r);
nlohmann::json to_json(const Snapshot & s);
nlohmann::json to_json(const Occurrence & o);

}  // namespace symboleo::runtime
