#include "symboleo/codegen/manifest.hpp"

#include "symboleo/common/error.hpp"

namespace symboleo::codegen
{

namespace
{

using nlohmann::json;

json interval_to_json(const Interval & i, const SymboleoSpec & spec)
{
  if (const auto * a = std::get_if<AbsoluteInterval>(&i)) {
    return {{"kind", "absolute"}, {"start", value_to_json(a->start)}, {"end", value_to_json(a->end)}};
  }
  std::string anchor;
  Duration d;
  if (const auto * r = std::get_if<RelativeInterval>(&i)) {
    anchor = r->anchor;
    d = r->duration;
  } else {
    const WindowDecl * w = spec.find_window(std::get<NamedInterval>(i).window);
    if (w == nullptr) {
      throw Error(codes::kInvalidSpec, "unknown window '" + std::get<NamedInterval>(i).window + "'");
    }
    anchor = w->anchor;
    d = w->duration;
  }
  return {
    {"kind", "relative"},
    {"anchor", anchor},
    {"magnitude", d.magnitude},
    {"unit", std::string{unit_name(d.unit, 2)}}};
}

ManifestObligation obligation_entry(const Obligation & o, const SymboleoSpec & spec)
{
  return {o.id, o.debtor, o.creditor, prop_to_json(o.trigger, spec), prop_to_json(o.consequent, spec)};
}

json action_to_json(const PowerAction & a, const SymboleoSpec & spec)
{
  if (const auto * s = std::get_if<action::Suspend>(&a)) {
    return {{"kind", "suspend"}, {"targets", s->targets}};
  }
  if (const auto * r = std::get_if<action::Resume>(&a)) {
    return {{"kind", "resume"}, {"targets", r->targets}};
  }
  if (std::holds_alternative<action::Terminate>(a)) {
    return {{"kind", "terminate"}};
  }
  const auto & imp = std::get<action::Impose>(a);
  return {{"kind", "impose"}, {"obligation", obligation_to_json(obligation_entry(imp.obligation, spec))}};
}

ManifestEntity entity(const Binding & b, const SymboleoSpec & spec)
{
  ManifestEntity e;
  e.name = b.name;
  e.type = b.type;
  if (const DomainDecl * d = spec.find_domain(b.type)) {
    for (const auto & a : d->attributes) {
      e.attributes.push_back(a.name);
    }
  }
  for (const auto & as : b.assignments) {
    e.assignments[as.attribute] = value_to_json(as.value);
  }
  return e;
}

json entity_to_json(const ManifestEntity & e)
{
  return {{"name", e.name}, {"type", e.type}, {"attributes", e.attributes}, {"assignments", e.assignments}};
}

ManifestEntity entity_from_json(const json & j)
{
  return {
    j.at("name").get<std::string>(), j.at("type").get<std::string>(),
    j.at("attributes").get<std::vector<std::string>>(), j.at("assignments")};
}

ManifestObligation obligation_from_json(const json & j)
{
  return {
    j.at("id").get<std::string>(), j.at("debtor").get<std::string>(), j.at("creditor").get<std::string>(),
    j.at("trigger"), j.at("consequent")};
}

}  // namespace

json value_to_json(const Value & v)
{
  switch (v.kind) {
    case Value::Kind::Number:
      return {{"number", v.number}};
    case Value::Kind::String:
      return {{"string", v.text}};
    case Value::Kind::Date:
      return {{"date", format_iso_date(v.date)}};
    case Value::Kind::Param:
      return {{"param", v.text}};
  }
  return nullptr;
}

json prop_to_json(const Prop & p, const SymboleoSpec & spec)
{
  return std::visit(
    [&](const auto & n) -> json {
      using T = std::decay_t<decltype(n)>;
      if constexpr (std::is_same_v<T, prop::Literal>) {
        return {{"op", n.value ? "true" : "false"}};
      } else if constexpr (std::is_same_v<T, prop::Happens>) {
        return {{"op", "happens"}, {"event", n.event}};
      } else if constexpr (std::is_same_v<T, prop::HappensBefore>) {
        return {{"op", "happensBefore"}, {"event", n.event}, {"time", value_to_json(n.time)}};
      } else if constexpr (std::is_same_v<T, prop::HappensAfter>) {
        return {{"op", "happensAfter"}, {"event", n.event}, {"time", value_to_json(n.time)}};
      } else if constexpr (std::is_same_v<T, prop::HappensWithin>) {
        return {{"op", "happensWithin"}, {"event", n.event}, {"interval", interval_to_json(n.interval, spec)}};
      } else if constexpr (std::is_same_v<T, prop::Violated>) {
        return {{"op", "violated"}, {"obligation", n.obligation}};
      } else if constexpr (std::is_same_v<T, prop::Fulfilled>) {
        return {{"op", "fulfilled"}, {"obligation", n.obligation}};
      } else if constexpr (std::is_same_v<T, prop::AttrCmp>) {
        return {
          {"op", "attr"},
          {"event", n.event},
          {"attribute", n.attribute},
          {"cmp", std::string{to_string(n.op)}},
          {"value", value_to_json(n.value)}};
      } else if constexpr (std::is_same_v<T, prop::Not>) {
        return {{"op", "not"}, {"arg", prop_to_json(n.operand, spec)}};
      } else if constexpr (std::is_same_v<T, prop::And>) {
        return {{"op", "and"}, {"args", {prop_to_json(n.lhs, spec), prop_to_json(n.rhs, spec)}}};
      } else {
        return {{"op", "or"}, {"args", {prop_to_json(n.lhs, spec), prop_to_json(n.rhs, spec)}}};
      }
    },
    p.node());
}

StateMachineManifest manifest_from_spec(const SymboleoSpec & spec)
{
  StateMachineManifest m;
  m.contract = spec.name;
  for (const auto & p : spec.parameters) {
    m.parameters.emplace_back(p.name, std::string{to_string(p.kind)});
  }
  for (const auto & b : spec.bindings) {
    const auto cat = spec.category_of(b.name);
    if (!cat) {
      continue;
    }
    auto & bucket = *cat == Category::Role ? m.roles : *cat == Category::Asset ? m.assets : m.events;
    bucket.push_back(entity(b, spec));
  }
  for (const auto & o : spec.obligations) {
    m.obligations.push_back(obligation_entry(o, spec));
  }
  for (const auto & p : spec.powers) {
    m.powers.push_back(
      {p.id, p.holder, p.counterparty, prop_to_json(p.trigger, spec), action_to_json(p.action, spec)});
  }
  return m;
}

json obligation_to_json(const ManifestObligation & o)
{
  return {
    {"id", o.id}, {"debtor", o.debtor}, {"creditor", o.creditor}, {"trigger", o.trigger},
    {"consequent", o.consequent}};
}

json to_json(const StateMachineManifest & m)
{
  json j;
  j["schema"] = kManifestSchema;
  j["contract"] = m.contract;
  j["parameters"] = json::array();
  for (const auto & [name, kind] : m.parameters) {
    j["parameters"].push_back({{"name", name}, {"kind", kind}});
  }
  for (const auto * key : {"roles", "assets", "events"}) {
    const auto & list = std::string_view{key} == "roles"    ? m.roles
                        : std::string_view{key} == "assets" ? m.assets
                                                            : m.events;
    j[key] = json::array();
    for (const auto & e : list) {
      j[key].push_back(entity_to_json(e));
    }
  }
  j["obligations"] = json::array();
  for (const auto & o : m.obligations) {
    j["obligations"].push_back(obligation_to_json(o));
  }
  j["powers"] = json::array();
  for (const auto & p : m.powers) {
    j["powers"].push_back(
      {{"id", p.id}, {"holder", p.holder}, {"counterparty", p.counterparty}, {"trigger", p.trigger},
       {"action", p.action}});
  }
  return j;
}

StateMachineManifest manifest_from_json(const json & j)
{
  try {
    if (j.at("schema").get<std::string>() != kManifestSchema) {
      throw Error(codes::kBadRequest, "unsupported manifest schema '" + j.at("schema").get<std::string>() + "'");
    }
    StateMachineManifest m;
    m.contract = j.at("contract").get<std::string>();
    for (const auto & p : j.at("parameters")) {
      m.parameters.emplace_back(p.at("name").get<std::string>(), p.at("kind").get<std::string>());
    }
    for (const auto & e : j.at("roles")) {
      m.roles.push_back(entity_from_json(e));
    }
    for (const auto & e : j.at("assets")) {
      m.assets.push_back(entity_from_json(e));
    }
    for (const auto & e : j.at("events")) {
      m.events.push_back(entity_from_json(e));
    }
    for (const auto & o : j.at("obligations")) {
      m.obligations.push_back(obligation_from_json(o));
    }
    for (const auto & p : j.at("powers")) {
      m.powers.push_back(
        {p.at("id").get<std::string>(), p.at("holder").get<std::string>(),
         p.at("counterparty").get<std::string>(), p.at("trigger"), p.at("action")});
    }
    return m;
  } catch (const json::exception & e) {
    throw Error(codes::kBadRequest, std::string{"malformed manifest: "} + e.what());
  }
}

}  // namespace symboleo::codegen
