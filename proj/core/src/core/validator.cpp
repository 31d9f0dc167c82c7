#include "symboleo/core/validator.hpp"

#include <map>
#include <set>
#include <string>

namespace symboleo
{

namespace
{

class Validator
{
public:
  explicit Validator(const SymboleoSpec & spec) : spec_(spec) {}

  std::vector<Diagnostic> run()
  {
    check_duplicates();
    for (const auto & p : spec_.parameters) {
      check_parameter(p);
    }
    for (const auto & b : spec_.bindings) {
      check_binding(b);
    }
    for (const auto & w : spec_.windows) {
      check_event_ref(w.anchor, w.anchor_loc.span);
      check_duration(w.duration, w.loc.span);
    }
    for (const auto & o : spec_.obligations) {
      check_obligation(o);
    }
    for (const auto & p : spec_.powers) {
      check_power(p);
    }
    sort_diagnostics(out_);
    return std::move(out_);
  }

private:
  void report(std::string_view code, const Span & span, std::string message)
  {
    out_.push_back({Severity::Error, std::string{code}, span, std::move(message)});
  }

  void warn(std::string_view code, const Span & span, std::string message)
  {
    out_.push_back({Severity::Warning, std::string{code}, span, std::move(message)});
  }

  // ---- identifiers --------------------------------------------------------

  void check_duplicates()
  {
    auto unique = [this](std::set<std::string> & seen, const std::string & name, const Span & span,
                         std::string_view what) {
      if (!seen.insert(name).second) {
        report(codes::kDuplicateId, span, "duplicate " + std::string{what} + " '" + name + "'");
      }
    };
    std::set<std::string> params;
    for (const auto & p : spec_.parameters) {
      unique(params, p.name, p.loc.span, "parameter");
    }
    std::set<std::string> types;
    for (const auto & d : spec_.domain) {
      unique(types, d.name, d.loc.span, "type");
      std::set<std::string> attrs;
      for (const auto & a : d.attributes) {
        unique(attrs, a.name, a.loc.span, "attribute");
      }
    }
    std::set<std::string> bindings;
    for (const auto & b : spec_.bindings) {
      unique(bindings, b.name, b.loc.span, "declaration");
      std::set<std::string> assigned;
      for (const auto & a : b.assignments) {
        unique(assigned, a.attribute, a.loc.span, "assignment to");
      }
    }
    for (const auto & w : spec_.windows) {
      unique(bindings, w.name, w.loc.span, "declaration");
    }
    std::set<std::string> obligations;
    for (const auto & o : spec_.obligations) {
      unique(obligations, o.id, o.loc.span, "obligation");
    }
    for (const Obligation * o : spec_.imposable_obligations()) {
      unique(obligations, o->id, o->loc.span, "obligation");
    }
    std::set<std::string> powers;
    for (const auto & p : spec_.powers) {
      unique(powers, p.id, p.loc.span, "power");
    }
  }

  // ---- declarations -------------------------------------------------------

  void check_parameter(const Parameter & p)
  {
    if (p.role_type.empty()) {
      return;
    }
    const DomainDecl * d = spec_.find_domain(p.role_type);
    if (d == nullptr) {
      report(codes::kUnresolved, p.loc.span, "unresolved type '" + p.role_type + "'");
    } else if (d->category != Category::Role) {
      report(
        codes::kKindMismatch, p.loc.span,
        "parameter '" + p.name + "' is typed by '" + p.role_type + "', which is not a Role");
    }
  }

  std::optional<AttrKind> kind_of(const Value & v)
  {
    switch (v.kind) {
      case Value::Kind::Number:
        return AttrKind::Number;
      case Value::Kind::String:
        return AttrKind::String;
      case Value::Kind::Date:
        return AttrKind::Date;
      case Value::Kind::Param: {
        const Parameter * p = spec_.find_parameter(v.text);
        if (p == nullptr) {
          report(codes::kUnresolved, v.loc.span, "unresolved parameter '" + v.text + "'");
          return std::nullopt;
        }
        return value_kind_of(p->kind);
      }
    }
    return std::nullopt;
  }

  void check_binding(const Binding & b)
  {
    const DomainDecl * d = spec_.find_domain(b.type);
    if (d == nullptr) {
      report(codes::kUnresolved, b.type_loc.span, "unresolved type '" + b.type + "'");
      return;
    }
    if (b.signature) {
      const auto & sig = *b.signature;
      if (d->category != Category::Event) {
        report(
          codes::kKindMismatch, sig.loc.span,
          "only event declarations carry a signature; '" + b.type + "' is a " +
            std::string{to_string(d->category)});
      }
      check_party(sig.subject, sig.loc.span, false);
      if (!sig.object.empty()) {
        check_party(sig.object, sig.loc.span, true);
      }
    }
    for (const auto & a : b.assignments) {
      const Attribute * attr = d->find_attribute(a.attribute);
      if (attr == nullptr) {
        report(
          codes::kUnresolved, a.loc.span,
          "type '" + d->name + "' has no attribute '" + a.attribute + "'");
        continue;
      }
      auto k = kind_of(a.value);
      if (k && *k != attr->kind) {
        report(
          codes::kKindMismatch, a.value.loc.span,
          "attribute '" + a.attribute + "' is " + std::string{to_string(attr->kind)} +
            " but the value is " + std::string{to_string(*k)});
      }
    }
  }

  // A Role binding, or (when allow_asset) a Role or Asset binding.
  void check_party(const std::string & name, const Span & span, bool allow_asset)
  {
    if (spec_.find_binding(name) == nullptr) {
      report(codes::kUnresolved, span, "unresolved party '" + name + "'");
      return;
    }
    auto cat = spec_.category_of(name);
    if (!cat) {
      return;  // the binding's own type error is reported separately
    }
    if (*cat != Category::Role && !(allow_asset && *cat == Category::Asset)) {
      report(
        codes::kKindMismatch, span,
        "'" + name + "' is " + std::string{to_string(*cat)} +
          (allow_asset ? ", expected a Role or Asset" : ", expected a Role"));
    }
  }

  const DomainDecl * check_event_ref(const std::string & name, const Span & span)
  {
    const Binding * b = spec_.find_binding(name);
    if (b == nullptr) {
      report(codes::kUnresolved, span, "unresolved event '" + name + "'");
      return nullptr;
    }
    const DomainDecl * d = spec_.find_domain(b->type);
    if (d == nullptr) {
      return nullptr;
    }
    if (d->category != Category::Event) {
      report(
        codes::kKindMismatch, span,
        "'" + name + "' is " + std::string{to_string(d->category)} + ", expected an Event");
      return nullptr;
    }
    return d;
  }

  void check_duration(const Duration & d, const Span & span)
  {
    if (d.magnitude < 1) {
      report(codes::kInvalidInterval, span, "duration must be at least 1");
    }
  }

  // ---- norms --------------------------------------------------------------

  void check_sides(
    const std::string & a, const Span & a_span, const std::string & b, const Span & b_span,
    std::string_view what)
  {
    check_party(a, a_span, false);
    check_party(b, b_span, false);
    if (a == b) {
      report(codes::kSameParty, b_span, std::string{what} + " has '" + a + "' on both sides");
    }
  }

  void check_obligation(const Obligation & o)
  {
    check_sides(o.debtor, o.debtor_loc.span, o.creditor, o.creditor_loc.span, "obligation " + o.id);
    check_prop(o.trigger);
    check_prop(o.consequent);
  }

  bool obligation_exists(const std::string & id) const
  {
    if (spec_.find_obligation(id) != nullptr) {
      return true;
    }
    for (const Obligation * o : spec_.imposable_obligations()) {
      if (o->id == id) {
        return true;
      }
    }
    return false;
  }

  void check_targets(const std::vector<std::string> & targets, const Span & span)
  {
    for (const auto & t : targets) {
      if (!obligation_exists(t)) {
        report(codes::kUnresolved, span, "unresolved obligation '" + t + "'");
      }
    }
  }

  void check_power(const Power & p)
  {
    check_sides(p.holder, p.holder_loc.span, p.counterparty, p.counterparty_loc.span, "power " + p.id);
    check_prop(p.trigger);
    if (const auto * s = std::get_if<action::Suspend>(&p.action)) {
      check_targets(s->targets, s->loc.span);
    } else if (const auto * r = std::get_if<action::Resume>(&p.action)) {
      check_targets(r->targets, r->loc.span);
    } else if (const auto * imp = std::get_if<action::Impose>(&p.action)) {
      check_obligation(imp->obligation);
    }
  }

  void check_time_point(const Value & v)
  {
    if (v.kind == Value::Kind::Date) {
      return;
    }
    auto k = kind_of(v);
    if (k && *k != AttrKind::Date) {
      report(codes::kKindMismatch, v.loc.span, "'" + v.text + "' is not a Date parameter");
    }
  }

  void check_interval(const Interval & i, const Span & span)
  {
    if (const auto * a = std::get_if<AbsoluteInterval>(&i)) {
      check_time_point(a->start);
      check_time_point(a->end);
      if (a->start.kind == Value::Kind::Date && a->end.kind == Value::Kind::Date) {
        if (a->start.date > a->end.date) {
          report(codes::kInvalidInterval, span, "interval starts after it ends");
        } else if (a->start.date == a->end.date) {
          warn(codes::kEmptyInterval, span, "interval starts and ends on the same day");
        }
      }
    } else if (const auto * r = std::get_if<RelativeInterval>(&i)) {
      check_event_ref(r->anchor, r->anchor_loc.span);
      check_duration(r->duration, span);
    } else {
      const auto & n = std::get<NamedInterval>(i);
      if (spec_.find_window(n.window) == nullptr) {
        report(codes::kUnresolved, n.loc.span, "unresolved window '" + n.window + "'");
      }
    }
  }

  void check_prop(const Prop & p)
  {
    std::visit(
      [&](const auto & n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, prop::Happens>) {
          check_event_ref(n.event, n.loc.span);
        } else if constexpr (
          std::is_same_v<T, prop::HappensBefore> || std::is_same_v<T, prop::HappensAfter>) {
          check_event_ref(n.event, n.loc.span);
          check_time_point(n.time);
        } else if constexpr (std::is_same_v<T, prop::HappensWithin>) {
          check_event_ref(n.event, n.loc.span);
          check_interval(n.interval, p.span());
        } else if constexpr (
          std::is_same_v<T, prop::Violated> || std::is_same_v<T, prop::Fulfilled>) {
          if (!obligation_exists(n.obligation)) {
            report(codes::kUnresolved, n.loc.span, "unresolved obligation '" + n.obligation + "'");
          }
        } else if constexpr (std::is_same_v<T, prop::AttrCmp>) {
          const DomainDecl * d = check_event_ref(n.event, n.loc.span);
          if (d == nullptr) {
            return;
          }
          const Attribute * attr = d->find_attribute(n.attribute);
          if (attr == nullptr) {
            report(
              codes::kUnresolved, p.span(),
              "event type '" + d->name + "' has no attribute '" + n.attribute + "'");
            return;
          }
          auto k = kind_of(n.value);
          if (k && *k != attr->kind) {
            report(
              codes::kKindMismatch, n.value.loc.span,
              "cannot compare " + std::string{to_string(attr->kind)} + " attribute '" +
                n.attribute + "' with a " + std::string{to_string(*k)});
          }
        } else if constexpr (std::is_same_v<T, prop::Not>) {
          check_prop(n.operand);
        } else if constexpr (std::is_same_v<T, prop::And> || std::is_same_v<T, prop::Or>) {
          check_prop(n.lhs);
          check_prop(n.rhs);
        }
      },
      p.node());
  }

  const SymboleoSpec & spec_;
  std::vector<Diagnostic> out_;
};

}  // namespace

std::vector<Diagnostic> validate(const SymboleoSpec & spec) { return Validator{spec}.run(); }

}  // namespace symboleo
