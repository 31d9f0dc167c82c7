#include "symboleo/runtime/compiled.hpp"

#include <charconv>
#include <cmath>

#include "symboleo/common/error.hpp"
#include "symboleo/core/printer.hpp"
#include "symboleo/core/validator.hpp"
#include "symboleo/tmpl/template.hpp"

namespace symboleo::runtime
{

namespace
{

using nlohmann::json;

std::optional<double> parse_double(std::string_view s)
{
  double v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size() || !std::isfinite(v)) {
    return std::nullopt;
  }
  return v;
}

class Compiler
{
public:
  Compiler(const SymboleoSpec & spec, CompiledContract & out) : spec_(spec), out_(out) {}

  CValue value(const Value & v) const
  {
    CValue c;
    switch (v.kind) {
      case Value::Kind::Number:
        c.kind = AttrKind::Number;
        c.number = v.number;
        break;
      case Value::Kind::String:
        c.kind = AttrKind::String;
        c.text = v.text;
        break;
      case Value::Kind::Date:
        c.kind = AttrKind::Date;
        c.time = start_of(v.date);
        break;
      case Value::Kind::Param:
        for (const auto & p : out_.parameters) {
          if (p.name == v.text) {
            c = p.value;
            c.param = p.name;
            return c;
          }
        }
        throw Error(codes::kInvalidSpec, "unbound parameter '" + v.text + "'");
    }
    return c;
  }

  int event(const std::string & name) const
  {
    const int i = out_.event_index(name);
    if (i < 0) {
      throw Error(codes::kInvalidSpec, "unknown event '" + name + "'");
    }
    return i;
  }

  int obligation(const std::string & id) const
  {
    const int i = out_.obligation_index(id);
    if (i < 0) {
      throw Error(codes::kInvalidSpec, "unknown obligation '" + id + "'");
    }
    return i;
  }

  CInterval interval(const Interval & i) const
  {
    CInterval c;
    if (const auto * a = std::get_if<AbsoluteInterval>(&i)) {
      c.start = value(a->start);
      c.end = value(a->end);
      return c;
    }
    c.relative = true;
    if (const auto * r = std::get_if<RelativeInterval>(&i)) {
      c.anchor = event(r->anchor);
      c.duration = r->duration;
      return c;
    }
    const WindowDecl * w = spec_.find_window(std::get<NamedInterval>(i).window);
    if (w == nullptr) {
      throw Error(codes::kInvalidSpec, "unknown window '" + std::get<NamedInterval>(i).window + "'");
    }
    c.anchor = event(w->anchor);
    c.duration = w->duration;
    return c;
  }

  CProp prop(const Prop & p) const
  {
    CProp c;
    std::visit(
      [&](const auto & n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, prop::Literal>) {
          c.op = n.value ? CProp::Op::True : CProp::Op::False;
        } else if constexpr (std::is_same_v<T, prop::Happens>) {
          c.op = CProp::Op::Happens;
          c.event = event(n.event);
        } else if constexpr (std::is_same_v<T, prop::HappensBefore>) {
          c.op = CProp::Op::Before;
          c.event = event(n.event);
          c.value = value(n.time);
        } else if constexpr (std::is_same_v<T, prop::HappensAfter>) {
          c.op = CProp::Op::After;
          c.event = event(n.event);
          c.value = value(n.time);
        } else if constexpr (std::is_same_v<T, prop::HappensWithin>) {
          c.op = CProp::Op::Within;
          c.event = event(n.event);
          c.interval = interval(n.interval);
        } else if constexpr (std::is_same_v<T, prop::Violated>) {
          c.op = CProp::Op::Violated;
          c.obligation = obligation(n.obligation);
        } else if constexpr (std::is_same_v<T, prop::Fulfilled>) {
          c.op = CProp::Op::Fulfilled;
          c.obligation = obligation(n.obligation);
        } else if constexpr (std::is_same_v<T, prop::AttrCmp>) {
          c.op = CProp::Op::Attr;
          c.event = event(n.event);
          c.attribute = n.attribute;
          const Attribute * a = out_.events[static_cast<std::size_t>(c.event)].find_attribute(n.attribute);
          if (a == nullptr) {
            throw Error(codes::kInvalidSpec, "unknown attribute '" + n.attribute + "'");
          }
          c.attribute_kind = a->kind;
          c.cmp = n.op;
          c.value = value(n.value);
        } else if constexpr (std::is_same_v<T, prop::Not>) {
          c.op = CProp::Op::Not;
          c.args.push_back(prop(n.operand));
        } else if constexpr (std::is_same_v<T, prop::And>) {
          c.op = CProp::Op::And;
          c.args.push_back(prop(n.lhs));
          c.args.push_back(prop(n.rhs));
        } else {
          c.op = CProp::Op::Or;
          c.args.push_back(prop(n.lhs));
          c.args.push_back(prop(n.rhs));
        }
      },
      p.node());
    return c;
  }

  CEntity entity(const Binding & b) const
  {
    CEntity e;
    e.name = b.name;
    e.type = b.type;
    if (const DomainDecl * d = spec_.find_domain(b.type)) {
      e.attributes = d->attributes;
    }
    for (const auto & a : b.assignments) {
      e.assigned.emplace(a.attribute, value(a.value));
    }
    return e;
  }

  CObligation obligation_shell(const Obligation & o, bool imposed) const
  {
    return {o.id, o.debtor, o.creditor, {}, {}, imposed};
  }

  void fill(CObligation & c, const Obligation & o) const
  {
    c.trigger = prop(o.trigger);
    c.consequent = prop(o.consequent);
  }

private:
  const SymboleoSpec & spec_;
  CompiledContract & out_;
};

// Manifest value for a compiled literal.
json describe_prop(const CProp & p, const CompiledContract & c);

json describe_interval(const CInterval & i, const CompiledContract & c)
{
  if (!i.relative) {
    return {{"kind", "absolute"}, {"start", value_json(i.start)}, {"end", value_json(i.end)}};
  }
  return {
    {"kind", "relative"},
    {"anchor", c.events[static_cast<std::size_t>(i.anchor)].name},
    {"magnitude", i.duration.magnitude},
    {"unit", std::string{unit_name(i.duration.unit, 2)}}};
}

json describe_prop(const CProp & p, const CompiledContract & c)
{
  auto ev = [&] { return c.events[static_cast<std::size_t>(p.event)].name; };
  auto ob = [&] { return c.obligations[static_cast<std::size_t>(p.obligation)].id; };
  switch (p.op) {
    case CProp::Op::True:
      return {{"op", "true"}};
    case CProp::Op::False:
      return {{"op", "false"}};
    case CProp::Op::Happens:
      return {{"op", "happens"}, {"event", ev()}};
    case CProp::Op::Before:
      return {{"op", "happensBefore"}, {"event", ev()}, {"time", value_json(p.value)}};
    case CProp::Op::After:
      return {{"op", "happensAfter"}, {"event", ev()}, {"time", value_json(p.value)}};
    case CProp::Op::Within:
      return {{"op", "happensWithin"}, {"event", ev()}, {"interval", describe_interval(p.interval, c)}};
    case CProp::Op::Violated:
      return {{"op", "violated"}, {"obligation", ob()}};
    case CProp::Op::Fulfilled:
      return {{"op", "fulfilled"}, {"obligation", ob()}};
    case CProp::Op::Attr:
      return {
        {"op", "attr"},
        {"event", ev()},
        {"attribute", p.attribute},
        {"cmp", std::string{to_string(p.cmp)}},
        {"value", value_json(p.value)}};
    case CProp::Op::Not:
      return {{"op", "not"}, {"arg", describe_prop(p.args.at(0), c)}};
    case CProp::Op::And:
    case CProp::Op::Or: {
      json args = json::array();
      for (const auto & a : p.args) {
        args.push_back(describe_prop(a, c));
      }
      return {{"op", p.op == CProp::Op::And ? "and" : "or"}, {"args", args}};
    }
  }
  return nullptr;
}

codegen::ManifestEntity describe_entity(const CEntity & e)
{
  codegen::ManifestEntity m;
  m.name = e.name;
  m.type = e.type;
  for (const auto & a : e.attributes) {
    m.attributes.push_back(a.name);
  }
  for (const auto & [k, v] : e.assigned) {
    m.assignments[k] = value_json(v);
  }
  return m;
}

codegen::ManifestObligation describe_obligation(const CObligation & o, const CompiledContract & c)
{
  return {o.id, o.debtor, o.creditor, describe_prop(o.trigger, c), describe_prop(o.consequent, c)};
}

}  // namespace

const Attribute * CEntity::find_attribute(std::string_view a) const
{
  for (const auto & x : attributes) {
    if (x.name == a) {
      return &x;
    }
  }
  return nullptr;
}

int CompiledContract::event_index(std::string_view n) const
{
  for (std::size_t i = 0; i < events.size(); ++i) {
    if (events[i].name == n) {
      return static_cast<int>(i);
    }
  }
  return -1;
}

int CompiledContract::obligation_index(std::string_view id) const
{
  for (std::size_t i = 0; i < obligations.size(); ++i) {
    if (obligations[i].id == id) {
      return static_cast<int>(i);
    }
  }
  return -1;
}

int CompiledContract::power_index(std::string_view id) const
{
  for (std::size_t i = 0; i < powers.size(); ++i) {
    if (powers[i].id == id) {
      return static_cast<int>(i);
    }
  }
  return -1;
}

std::optional<CValue> parse_literal(ParamKind kind, std::string_view text)
{
  if (!tmpl::literal_matches(kind, text)) {
    return std::nullopt;
  }
  CValue v;
  v.kind = value_kind_of(kind);
  switch (kind) {
    case ParamKind::Date: {
      if (auto d = parse_iso_date(text)) {
        v.time = start_of(*d);
        return v;
      }
      // "March 31, 2024"
      const auto space = text.find(' ');
      const auto comma = text.find(',');
      const auto month = month_from_name(text.substr(0, space));
      const auto day = parse_double(text.substr(space + 1, comma - space - 1));
      const auto year = parse_double(text.substr(comma + 2));
      if (!month || !day || !year) {
        return std::nullopt;
      }
      const std::chrono::year_month_day ymd{
        std::chrono::year{static_cast<int>(*year)}, std::chrono::month{*month},
        std::chrono::day{static_cast<unsigned>(*day)}};
      v.time = start_of(Date{ymd});
      return v;
    }
    case ParamKind::Number:
    case ParamKind::Money:
    case ParamKind::Percentage: {
      std::string digits;
      for (char ch : text) {
        if (ch != '$' && ch != ',' && ch != '%') {
          digits += ch;
        }
      }
      const auto n = parse_double(digits);
      if (!n) {
        return std::nullopt;
      }
      v.number = *n;
      return v;
    }
    case ParamKind::Party:
    case ParamKind::String:
      v.text = std::string{text};
      return v;
  }
  return std::nullopt;
}

std::map<std::string, std::string> params_from_json(const nlohmann::json & j)
{
  if (!j.is_object()) {
    throw Error(codes::kBadParameterValue, "parameter values must be a JSON object");
  }
  std::map<std::string, std::string> out;
  for (const auto & [k, v] : j.items()) {
    if (v.is_string()) {
      out.emplace(k, v.get<std::string>());
    } else if (v.is_number()) {
      out.emplace(k, format_number(v.get<double>()));
    } else {
      throw Error(codes::kBadParameterValue, "value for parameter '" + k + "' must be a string or number");
    }
  }
  return out;
}

CompiledContract compile(const SymboleoSpec & spec, const std::map<std::string, std::string> & params)
{
  for (const auto & d : validate(spec)) {
    if (d.severity == Severity::Error) {
      throw Error(codes::kInvalidSpec, "cannot compile an invalid spec: " + d.code + " " + d.message);
    }
  }

  CompiledContract out;
  out.name = spec.name;
  for (const auto & p : spec.parameters) {
    auto it = params.find(p.name);
    if (it == params.end()) {
      throw Error(codes::kBadParameterValue, "missing value for parameter '" + p.name + "'");
    }
    auto v = parse_literal(p.kind, it->second);
    if (!v) {
      throw Error(
        codes::kBadParameterValue, "value '" + it->second + "' for parameter '" + p.name + "' is not a " +
                                     std::string{to_string(p.kind)});
    }
    out.parameters.push_back({p.name, p.kind, *v});
    if (p.name == "contract_end" && p.kind == ParamKind::Date) {
      out.contract_end = v->time;
    }
  }

  Compiler c{spec, out};
  for (const auto & b : spec.bindings) {
    const auto cat = spec.category_of(b.name);
    if (cat == Category::Role) {
      out.roles.push_back(c.entity(b));
    } else if (cat == Category::Asset) {
      out.assets.push_back(c.entity(b));
    } else if (cat == Category::Event) {
      out.events.push_back(c.entity(b));
    }
  }

  // Two passes: obligation ids must resolve before propositions compile.
  std::vector<const Obligation *> sources;
  for (const auto & o : spec.obligations) {
    out.obligations.push_back(c.obligation_shell(o, false));
    sources.push_back(&o);
  }
  for (const Obligation * o : spec.imposable_obligations()) {
    out.obligations.push_back(c.obligation_shell(*o, true));
    sources.push_back(o);
  }
  for (std::size_t i = 0; i < sources.size(); ++i) {
    c.fill(out.obligations[i], *sources[i]);
  }

  for (const auto & p : spec.powers) {
    CPower cp;
    cp.id = p.id;
    cp.holder = p.holder;
    cp.counterparty = p.counterparty;
    cp.trigger = c.prop(p.trigger);
    if (const auto * s = std::get_if<action::Suspend>(&p.action)) {
      cp.kind = CPower::Kind::Suspend;
      for (const auto & t : s->targets) {
        cp.targets.push_back(out.obligation_index(t));
      }
    } else if (const auto * r = std::get_if<action::Resume>(&p.action)) {
      cp.kind = CPower::Kind::Resume;
      for (const auto & t : r->targets) {
        cp.targets.push_back(out.obligation_index(t));
      }
    } else if (std::holds_alternative<action::Terminate>(p.action)) {
      cp.kind = CPower::Kind::Terminate;
    } else {
      cp.kind = CPower::Kind::Impose;
      cp.targets.push_back(out.obligation_index(std::get<action::Impose>(p.action).obligation.id));
    }
    out.powers.push_back(std::move(cp));
  }
  return out;
}

nlohmann::json value_json(const CValue & v)
{
  if (!v.param.empty()) {
    return {{"param", v.param}};
  }
  switch (v.kind) {
    case AttrKind::Number:
      return {{"number", v.number}};
    case AttrKind::String:
      return {{"string", v.text}};
    case AttrKind::Date:
      return {{"date", format_iso_date(std::chrono::floor<std::chrono::days>(v.time))}};
  }
  return nullptr;
}

codegen::StateMachineManifest describe(const CompiledContract & c)
{
  codegen::StateMachineManifest m;
  m.contract = c.name;
  for (const auto & p : c.parameters) {
    m.parameters.emplace_back(p.name, std::string{to_string(p.kind)});
  }
  for (const auto & e : c.roles) {
    m.roles.push_back(describe_entity(e));
  }
  for (const auto & e : c.assets) {
    m.assets.push_back(describe_entity(e));
  }
  for (const auto & e : c.events) {
    m.events.push_back(describe_entity(e));
  }
  for (const auto & o : c.obligations) {
    if (!o.imposed) {
      m.obligations.push_back(describe_obligation(o, c));
    }
  }
  for (const auto & p : c.powers) {
    json action;
    switch (p.kind) {
      case CPower::Kind::Suspend:
      case CPower::Kind::Resume: {
        json targets = json::array();
        for (int t : p.targets) {
          targets.push_back(c.obligations[static_cast<std::size_t>(t)].id);
        }
        action = {{"kind", p.kind == CPower::Kind::Suspend ? "suspend" : "resume"}, {"targets", targets}};
        break;
      }
      case CPower::Kind::Terminate:
        action = {{"kind", "terminate"}};
        break;
      case CPower::Kind::Impose:
        action = {
          {"kind", "impose"},
          {"obligation",
           codegen::obligation_to_json(
             describe_obligation(c.obligations[static_cast<std::size_t>(p.targets.at(0))], c))}};
        break;
    }
    m.powers.push_back({p.id, p.holder, p.counterparty, describe_prop(p.trigger, c), action});
  }
  return m;
}

}  // namespace symboleo::runtime
