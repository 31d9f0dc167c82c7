#include "symboleo/runtime/instance.hpp"

#include <algorithm>
#include <mutex>

#include "symboleo/common/error.hpp"

namespace symboleo::runtime
{

namespace
{

using nlohmann::json;
using namespace std::chrono_literals;

constexpr auto kDay = std::chrono::minutes{1440};

Truth kleene_not(Truth t)
{
  if (t == Truth::Unknown) {
    return t;
  }
  return t == Truth::True ? Truth::False : Truth::True;
}

Truth kleene_and(Truth a, Truth b)
{
  if (a == Truth::False || b == Truth::False) {
    return Truth::False;
  }
  return a == Truth::True && b == Truth::True ? Truth::True : Truth::Unknown;
}

Truth kleene_or(Truth a, Truth b)
{
  if (a == Truth::True || b == Truth::True) {
    return Truth::True;
  }
  return a == Truth::False && b == Truth::False ? Truth::False : Truth::Unknown;
}

template <typename T>
bool compare(const T & lhs, CmpOp op, const T & rhs)
{
  switch (op) {
    case CmpOp::Lt:
      return lhs < rhs;
    case CmpOp::Le:
      return lhs <= rhs;
    case CmpOp::Eq:
      return lhs == rhs;
    case CmpOp::Ge:
      return lhs >= rhs;
    case CmpOp::Gt:
      return lhs > rhs;
  }
  return false;
}

bool attr_holds(const AttrValue & v, CmpOp op, const CValue & rhs)
{
  if (const auto * n = std::get_if<double>(&v)) {
    return compare(*n, op, rhs.number);
  }
  if (const auto * t = std::get_if<Timestamp>(&v)) {
    return compare(*t, op, rhs.time);
  }
  return compare(std::get<std::string>(v), op, rhs.text);
}

AttrValue attr_from(const CValue & v)
{
  switch (v.kind) {
    case AttrKind::Number:
      return v.number;
    case AttrKind::Date:
      return v.time;
    case AttrKind::String:
      return v.text;
  }
  return v.text;
}

bool kind_matches(const AttrValue & v, AttrKind k)
{
  switch (k) {
    case AttrKind::Number:
      return std::holds_alternative<double>(v);
    case AttrKind::Date:
      return std::holds_alternative<Timestamp>(v);
    case AttrKind::String:
      return std::holds_alternative<std::string>(v);
  }
  return false;
}

std::optional<AttrValue> attr_from_json(const json & j, AttrKind k)
{
  switch (k) {
    case AttrKind::Number:
      if (j.is_number()) {
        return j.get<double>();
      }
      return std::nullopt;
    case AttrKind::Date:
      if (j.is_string()) {
        if (auto t = parse_timestamp(j.get<std::string>())) {
          return *t;
        }
      }
      return std::nullopt;
    case AttrKind::String:
      if (j.is_string()) {
        return j.get<std::string>();
      }
      return std::nullopt;
  }
  return std::nullopt;
}

json attr_json(const AttrValue & v)
{
  if (const auto * n = std::get_if<double>(&v)) {
    return *n;
  }
  if (const auto * t = std::get_if<Timestamp>(&v)) {
    return format_timestamp(*t);
  }
  return std::get<std::string>(v);
}

}  // namespace

std::string_view to_string(ObligationState s)
{
  switch (s) {
    case ObligationState::Created:
      return "Created";
    case ObligationState::InEffect:
      return "InEffect";
    case ObligationState::Suspended:
      return "Suspended";
    case ObligationState::Fulfilled:
      return "Fulfilled";
    case ObligationState::Violated:
      return "Violated";
  }
  return "?";
}

std::string_view to_string(PowerState s)
{
  switch (s) {
    case PowerState::Created:
      return "Created";
    case PowerState::InEffect:
      return "InEffect";
    case PowerState::Exerted:
      return "Exerted";
    case PowerState::Expired:
      return "Expired";
  }
  return "?";
}

std::string_view to_string(ContractState s)
{
  switch (s) {
    case ContractState::InEffect:
      return "InEffect";
    case ContractState::Fulfilled:
      return "Fulfilled";
    case ContractState::Terminated:
      return "Terminated";
  }
  return "?";
}

ContractInstance::ContractInstance(std::shared_ptr<const CompiledContract> contract, Timestamp start)
    : contract_(std::move(contract))
{
  s_.clock = start;
  const auto & obls = contract_->obligations;
  s_.obligations.assign(obls.size(), ObligationState::Created);
  s_.present.resize(obls.size());
  for (std::size_t i = 0; i < obls.size(); ++i) {
    s_.present[i] = !obls[i].imposed;
  }
  s_.powers.assign(contract_->powers.size(), PowerState::Created);
  settle(initial_);
}

ContractInstance::ContractInstance(const ContractInstance & other)
{
  std::shared_lock lock{other.mu_};
  contract_ = other.contract_;
  s_ = other.s_;
  initial_ = other.initial_;
}

bool ContractInstance::closed() const
{
  return contract_->contract_end && s_.clock >= *contract_->contract_end;
}

Truth ContractInstance::evaluate(const CProp & p) const
{
  std::shared_lock lock{mu_};
  return eval(p);
}

Truth ContractInstance::eval(const CProp & p) const
{
  const auto & c = *contract_;
  auto occurrences = [&](auto pred) {
    const std::string & name = c.events[static_cast<std::size_t>(p.event)].name;
    return std::any_of(s_.log.begin(), s_.log.end(), [&](const Occurrence & o) {
      return o.event == name && pred(o);
    });
  };
  const Truth open = closed() ? Truth::False : Truth::Unknown;

  switch (p.op) {
    case CProp::Op::True:
      return Truth::True;
    case CProp::Op::False:
      return Truth::False;
    case CProp::Op::Happens:
      return occurrences([](const Occurrence &) { return true; }) ? Truth::True : open;
    case CProp::Op::Before: {
      const Timestamp d = p.value.time;
      if (occurrences([&](const Occurrence & o) { return o.at < d; })) {
        return Truth::True;
      }
      return s_.clock >= d ? Truth::False : Truth::Unknown;
    }
    case CProp::Op::After: {
      const Timestamp d = p.value.time + kDay;
      return occurrences([&](const Occurrence & o) { return o.at >= d; }) ? Truth::True : open;
    }
    case CProp::Op::Within: {
      Timestamp start{};
      Timestamp end{};
      if (p.interval.relative) {
        const std::string & anchor = c.events[static_cast<std::size_t>(p.interval.anchor)].name;
        const auto it = std::find_if(
          s_.log.begin(), s_.log.end(), [&](const Occurrence & o) { return o.event == anchor; });
        if (it == s_.log.end()) {
          return Truth::Unknown;
        }
        start = it->at;
        end = add_duration(it->at, p.interval.duration) + 1min;
      } else {
        start = p.interval.start.time;
        end = p.interval.end.time + kDay;
      }
      if (occurrences([&](const Occurrence & o) { return o.at >= start && o.at < end; })) {
        return Truth::True;
      }
      return s_.clock >= end ? Truth::False : Truth::Unknown;
    }
    case CProp::Op::Violated:
    case CProp::Op::Fulfilled: {
      const auto i = static_cast<std::size_t>(p.obligation);
      if (!s_.present[i]) {
        return Truth::Unknown;
      }
      const auto st = s_.obligations[i];
      const auto yes = p.op == CProp::Op::Violated ? ObligationState::Violated : ObligationState::Fulfilled;
      const auto no = p.op == CProp::Op::Violated ? ObligationState::Fulfilled : ObligationState::Violated;
      if (st == yes) {
        return Truth::True;
      }
      return st == no ? Truth::False : Truth::Unknown;
    }
    case CProp::Op::Attr:
      return occurrences([&](const Occurrence & o) {
               const auto it = o.attributes.find(p.attribute);
               return it != o.attributes.end() && attr_holds(it->second, p.cmp, p.value);
             })
               ? Truth::True
               : open;
    case CProp::Op::Not:
      return kleene_not(eval(p.args.at(0)));
    case CProp::Op::And:
      return kleene_and(eval(p.args.at(0)), eval(p.args.at(1)));
    case CProp::Op::Or:
      return kleene_or(eval(p.args.at(0)), eval(p.args.at(1)));
  }
  return Truth::Unknown;
}

std::optional<Timestamp> ContractInstance::deadline_of(const CProp & p) const
{
  if (p.op == CProp::Op::Before) {
    return p.value.time;
  }
  if (p.op != CProp::Op::Within) {
    return std::nullopt;
  }
  if (!p.interval.relative) {
    return p.interval.end.time + kDay;
  }
  const std::string & anchor = contract_->events[static_cast<std::size_t>(p.interval.anchor)].name;
  for (const auto & o : s_.log) {
    if (o.event == anchor) {
      return add_duration(o.at, p.interval.duration) + 1min;
    }
  }
  return std::nullopt;
}

void ContractInstance::move_obligation(std::size_t i, ObligationState to, std::string reason, TransitionReport & r)
{
  r.push_back(
    {"obligation", contract_->obligations[i].id, std::string{to_string(s_.obligations[i])},
     std::string{to_string(to)}, std::move(reason), s_.clock});
  s_.obligations[i] = to;
}

void ContractInstance::move_power(std::size_t i, PowerState to, std::string reason, TransitionReport & r)
{
  r.push_back(
    {"power", contract_->powers[i].id, std::string{to_string(s_.powers[i])}, std::string{to_string(to)},
     std::move(reason), s_.clock});
  s_.powers[i] = to;
}

void ContractInstance::move_contract(ContractState to, std::string reason, TransitionReport & r)
{
  r.push_back(
    {"contract", contract_->name, std::string{to_string(s_.contract)}, std::string{to_string(to)},
     std::move(reason), s_.clock});
  s_.contract = to;
}

void ContractInstance::settle(TransitionReport & r)
{
  if (s_.contract != ContractState::InEffect) {
    return;
  }
  const auto & obls = contract_->obligations;
  const auto & pows = contract_->powers;
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t i = 0; i < obls.size(); ++i) {
      if (!s_.present[i]) {
        continue;
      }
      if (s_.obligations[i] == ObligationState::Created && eval(obls[i].trigger) == Truth::True) {
        move_obligation(i, ObligationState::InEffect, "trigger holds", r);
        changed = true;
      }
      if (s_.obligations[i] != ObligationState::InEffect) {
        continue;
      }
      const Truth v = eval(obls[i].consequent);
      if (v == Truth::True) {
        move_obligation(i, ObligationState::Fulfilled, "consequent satisfied", r);
        changed = true;
      } else if (v == Truth::False) {
        move_obligation(i, ObligationState::Violated, "consequent can no longer be satisfied", r);
        changed = true;
      }
    }
    for (std::size_t i = 0; i < pows.size(); ++i) {
      if (s_.powers[i] == PowerState::Created && eval(pows[i].trigger) == Truth::True) {
        move_power(i, PowerState::InEffect, "trigger holds", r);
        changed = true;
      }
    }
  }

  for (std::size_t i = 0; i < obls.size(); ++i) {
    if (s_.present[i] && s_.obligations[i] != ObligationState::Fulfilled) {
      return;
    }
  }
  if (std::find(s_.powers.begin(), s_.powers.end(), PowerState::InEffect) != s_.powers.end()) {
    return;
  }
  move_contract(ContractState::Fulfilled, "all obligations fulfilled", r);
  for (std::size_t i = 0; i < pows.size(); ++i) {
    if (s_.powers[i] == PowerState::Created) {
      move_power(i, PowerState::Expired, "contract fulfilled", r);
    }
  }
}

void ContractInstance::advance(Timestamp to, TransitionReport & r)
{
  if (to < s_.clock) {
    throw Error(
      codes::kTimeRegression,
      "time " + format_timestamp(to) + " is before the clock " + format_timestamp(s_.clock));
  }
  // A closed contract keeps its final snapshot.
  if (s_.contract == ContractState::InEffect) {
    s_.clock = to;
    settle(r);
  }
}

TransitionReport ContractInstance::tick(Timestamp to)
{
  std::unique_lock lock{mu_};
  TransitionReport r;
  advance(to, r);
  return r;
}

TransitionReport ContractInstance::submit_event(Occurrence occ)
{
  std::unique_lock lock{mu_};
  const int idx = contract_->event_index(occ.event);
  if (idx < 0) {
    throw Error(codes::kUnknownEvent, "unknown event '" + occ.event + "'");
  }
  const CEntity & ev = contract_->events[static_cast<std::size_t>(idx)];
  for (const auto & [name, v] : occ.attributes) {
    const Attribute * a = ev.find_attribute(name);
    if (a == nullptr) {
      throw Error(codes::kBadOccurrence, occ.event + " has no attribute '" + name + "'");
    }
    if (!kind_matches(v, a->kind)) {
      throw Error(
        codes::kBadOccurrence,
        occ.event + ": attribute " + name + " must be a " + std::string{to_string(a->kind)});
    }
  }
  for (const auto & a : ev.attributes) {
    if (occ.attributes.count(a.name) != 0) {
      continue;
    }
    const auto bound = ev.assigned.find(a.name);
    if (bound == ev.assigned.end()) {
      throw Error(codes::kBadOccurrence, occ.event + ": missing attribute '" + a.name + "'");
    }
    occ.attributes.emplace(a.name, attr_from(bound->second));
  }

  TransitionReport r;
  advance(occ.at, r);
  if (s_.contract != ContractState::InEffect) {
    return r;
  }
  s_.log.push_back(std::move(occ));
  settle(r);
  return r;
}

TransitionReport ContractInstance::submit_event(const std::string & event, Timestamp at, const json & attributes)
{
  Occurrence occ;
  occ.event = event;
  occ.at = at;
  if (!attributes.is_null() && !attributes.is_object()) {
    throw Error(codes::kBadOccurrence, "attributes must be a JSON object");
  }
  const int idx = contract_->event_index(event);
  if (idx < 0) {
    throw Error(codes::kUnknownEvent, "unknown event '" + event + "'");
  }
  const CEntity & ev = contract_->events[static_cast<std::size_t>(idx)];
  if (attributes.is_object()) {
    for (const auto & [k, v] : attributes.items()) {
      const Attribute * a = ev.find_attribute(k);
      if (a == nullptr) {
        throw Error(codes::kBadOccurrence, event + " has no attribute '" + k + "'");
      }
      auto parsed = attr_from_json(v, a->kind);
      if (!parsed) {
        throw Error(
          codes::kBadOccurrence, event + ": attribute " + k + " must be a " + std::string{to_string(a->kind)});
      }
      occ.attributes.emplace(k, std::move(*parsed));
    }
  }
  return submit_event(std::move(occ));
}

TransitionReport ContractInstance::exert_power(std::string_view id)
{
  std::unique_lock lock{mu_};
  const int idx = contract_->power_index(id);
  if (idx < 0 || s_.powers[static_cast<std::size_t>(idx)] != PowerState::InEffect ||
      s_.contract != ContractState::InEffect) {
    throw Error(codes::kPowerNotInEffect, "power " + std::string{id} + " is not in effect");
  }
  const auto pi = static_cast<std::size_t>(idx);
  const CPower & p = contract_->powers[pi];
  TransitionReport r;
  switch (p.kind) {
    case CPower::Kind::Suspend:
      for (int t : p.targets) {
        const auto i = static_cast<std::size_t>(t);
        if (s_.present[i] && s_.obligations[i] == ObligationState::InEffect) {
          move_obligation(i, ObligationState::Suspended, "suspended by power", r);
        }
      }
      break;
    case CPower::Kind::Resume:
      for (int t : p.targets) {
        const auto i = static_cast<std::size_t>(t);
        if (s_.present[i] && s_.obligations[i] == ObligationState::Suspended) {
          move_obligation(i, ObligationState::InEffect, "resumed by power", r);
        }
      }
      break;
    case CPower::Kind::Terminate:
      for (std::size_t i = 0; i < s_.powers.size(); ++i) {
        if (i != pi && s_.powers[i] == PowerState::InEffect) {
          move_power(i, PowerState::Expired, "contract terminated", r);
        }
      }
      move_contract(ContractState::Terminated, "terminated by power", r);
      break;
    case CPower::Kind::Impose: {
      const auto i = static_cast<std::size_t>(p.targets.at(0));
      if (!s_.present[i]) {
        s_.present[i] = true;
        move_obligation(i, ObligationState::InEffect, "imposed", r);
      }
      break;
    }
  }
  move_power(pi, PowerState::Exerted, "exerted by holder", r);
  settle(r);
  return r;
}

Snapshot ContractInstance::status() const
{
  std::shared_lock lock{mu_};
  Snapshot s;
  s.contract = contract_->name;
  s.clock = s_.clock;
  s.state = s_.contract;
  s.log_size = s_.log.size();
  for (std::size_t i = 0; i < contract_->obligations.size(); ++i) {
    if (!s_.present[i]) {
      continue;
    }
    s.obligations.emplace_back(contract_->obligations[i].id, s_.obligations[i]);
    if (s_.obligations[i] == ObligationState::InEffect) {
      if (auto d = deadline_of(contract_->obligations[i].consequent)) {
        s.deadlines.push_back({contract_->obligations[i].id, *d});
      }
    }
  }
  for (std::size_t i = 0; i < contract_->powers.size(); ++i) {
    s.powers.emplace_back(contract_->powers[i].id, s_.powers[i]);
  }
  return s;
}

std::vector<Occurrence> ContractInstance::log() const
{
  std::shared_lock lock{mu_};
  return s_.log;
}

json to_json(const Transition & t)
{
  return {{"kind", t.kind}, {"id", t.id}, {"from", t.from}, {"to", t.to}, {"reason", t.reason},
          {"at", format_timestamp(t.at)}};
}

json to_json(const TransitionReport & r)
{
  json a = json::array();
  for (const auto & t : r) {
    a.push_back(to_json(t));
  }
  return a;
}

json to_json(const Snapshot & s)
{
  json obls = json::object();
  for (const auto & [id, st] : s.obligations) {
    obls[id] = std::string{to_string(st)};
  }
  json pows = json::object();
  for (const auto & [id, st] : s.powers) {
    pows[id] = std::string{to_string(st)};
  }
  json deadlines = json::array();
  for (const auto & d : s.deadlines) {
    deadlines.push_back({{"obligation", d.obligation}, {"at", format_timestamp(d.at)}});
  }
  return {
    {"contract", s.contract},
    {"state", std::string{to_string(s.state)}},
    {"clock", format_timestamp(s.clock)},
    {"obligations", obls},
    {"powers", pows},
    {"deadlines", deadlines},
    {"logSize", s.log_size}};
}

json to_json(const Occurrence & o)
{
  json attrs = json::object();
  for (const auto & [k, v] : o.attributes) {
    attrs[k] = attr_json(v);
  }
  return {{"event", o.event}, {"at", format_timestamp(o.at)}, {"attributes", attrs}};
}

}  // namespace symboleo::runtime
