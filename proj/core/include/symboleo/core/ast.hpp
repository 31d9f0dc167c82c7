#pragma once

// Core Symboleo dialect: domain model, bindings, obligations and powers.
//
// All nodes are immutable values once built. Structural equality ignores
// source locations, so a spec parsed from differently formatted text compares
// equal to the original.

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "symboleo/common/calendar.hpp"
#include "symboleo/common/diagnostic.hpp"

namespace symboleo
{

// Source location attached to a node. Never participates in equality.
struct Loc
{
  Span span;

  friend bool operator==(const Loc &, const Loc &) { return true; }
};

enum class ParamKind { Date, Party, Number, Money, Percentage, String };
enum class Category { Role, Asset, Event };
enum class AttrKind { Number, Date, String };
enum class CmpOp { Lt, Le, Eq, Ge, Gt };

std::string_view to_string(ParamKind kind);
std::string_view to_string(Category category);
std::string_view to_string(AttrKind kind);
std::string_view to_string(CmpOp op);
std::optional<ParamKind> param_kind_from(std::string_view text);
std::optional<AttrKind> attr_kind_from(std::string_view text);
std::optional<Category> category_from(std::string_view text);

// Attribute kind a parameter value lands in (Money/Percentage are numbers,
// parties are names).
AttrKind value_kind_of(ParamKind kind);

struct Parameter
{
  std::string name;
  ParamKind kind = ParamKind::String;
  // Set when a party parameter is typed by a declared role (`buyer : Buyer`).
  std::string role_type;
  Loc loc;

  bool operator==(const Parameter &) const = default;
};

struct Attribute
{
  std::string name;
  AttrKind kind = AttrKind::String;
  Loc loc;

  bool operator==(const Attribute &) const = default;
};

struct DomainDecl
{
  std::string name;
  Category category = Category::Role;
  std::vector<Attribute> attributes;
  Loc loc;

  const Attribute * find_attribute(std::string_view attr) const;
  bool operator==(const DomainDecl &) const = default;
};

// Constant or parameter reference.
struct Value
{
  enum class Kind { Number, String, Date, Param };

  Kind kind = Kind::Number;
  double number = 0.0;
  std::string text;  // string contents, or the parameter name
  Date date{};
  Loc loc;

  static Value of_number(double n);
  static Value of_string(std::string s);
  static Value of_date(Date d);
  static Value of_param(std::string name);

  bool operator==(const Value &) const = default;
};

// Who does what to whom; lets controlled-language event phrases find events.
struct EventSignature
{
  std::string subject;
  std::string verb;
  std::string object;  // empty when the phrase has no object
  Loc loc;

  bool operator==(const EventSignature &) const = default;
};

struct Assignment
{
  std::string attribute;
  Value value;
  Loc loc;

  bool operator==(const Assignment &) const = default;
};

struct Binding
{
  std::string name;
  std::string type;
  std::optional<EventSignature> signature;
  std::vector<Assignment> assignments;
  Loc loc;
  Loc type_loc;

  bool operator==(const Binding &) const = default;
};

// A named relative time window: opens when `anchor` first happens and lasts
// `duration`.
struct WindowDecl
{
  std::string name;
  std::string anchor;
  Duration duration;
  Loc loc;
  Loc anchor_loc;

  bool operator==(const WindowDecl &) const = default;
};

struct AbsoluteInterval
{
  Value start;
  Value end;

  bool operator==(const AbsoluteInterval &) const = default;
};

struct RelativeInterval
{
  std::string anchor;
  Duration duration;
  Loc anchor_loc;

  bool operator==(const RelativeInterval &) const = default;
};

struct NamedInterval
{
  std::string window;
  Loc loc;

  bool operator==(const NamedInterval &) const = default;
};

using Interval = std::variant<AbsoluteInterval, RelativeInterval, NamedInterval>;

struct PropNode;

// Immutable, cheaply copyable proposition tree.
class Prop
{
public:
  Prop();
  explicit Prop(PropNode node, Span span = {});

  const PropNode & node() const { return *node_; }
  const Span & span() const { return span_; }

  friend bool operator==(const Prop & a, const Prop & b);

private:
  std::shared_ptr<const PropNode> node_;
  Span span_;
};

namespace prop
{
struct Literal
{
  bool value = true;
  bool operator==(const Literal &) const = default;
};
struct Happens
{
  std::string event;
  Loc loc;
  bool operator==(const Happens &) const = default;
};
struct HappensBefore
{
  std::string event;
  Value time;
  Loc loc;
  bool operator==(const HappensBefore &) const = default;
};
struct HappensAfter
{
  std::string event;
  Value time;
  Loc loc;
  bool operator==(const HappensAfter &) const = default;
};
struct HappensWithin
{
  std::string event;
  Interval interval;
  Loc loc;
  bool operator==(const HappensWithin &) const = default;
};
struct Violated
{
  std::string obligation;
  Loc loc;
  bool operator==(const Violated &) const = default;
};
struct Fulfilled
{
  std::string obligation;
  Loc loc;
  bool operator==(const Fulfilled &) const = default;
};
struct AttrCmp
{
  std::string event;
  std::string attribute;
  CmpOp op = CmpOp::Eq;
  Value value;
  Loc loc;
  bool operator==(const AttrCmp &) const = default;
};
struct Not
{
  Prop operand;
  bool operator==(const Not &) const = default;
};
struct And
{
  Prop lhs;
  Prop rhs;
  bool operator==(const And &) const = default;
};
struct Or
{
  Prop lhs;
  Prop rhs;
  bool operator==(const Or &) const = default;
};
}  // namespace prop

struct PropNode
: std::variant<
    prop::Literal, prop::Happens, prop::HappensBefore, prop::HappensAfter, prop::HappensWithin,
    prop::Violated, prop::Fulfilled, prop::AttrCmp, prop::Not, prop::And, prop::Or>
{
  using variant::variant;
};

Prop make_true();
Prop make_happens(std::string event);

struct Obligation
{
  std::string id;
  std::string debtor;
  std::string creditor;
  Prop trigger;
  Prop consequent;
  Loc loc;
  Loc debtor_loc;
  Loc creditor_loc;

  bool operator==(const Obligation &) const = default;
};

namespace action
{
struct Suspend
{
  std::vector<std::string> targets;
  Loc loc;
  bool operator==(const Suspend &) const = default;
};
struct Resume
{
  std::vector<std::string> targets;
  Loc loc;
  bool operator==(const Resume &) const = default;
};
struct Terminate
{
  bool operator==(const Terminate &) const = default;
};
struct Impose
{
  Obligation obligation;
  bool operator==(const Impose &) const = default;
};
}  // namespace action

using PowerAction = std::variant<action::Suspend, action::Resume, action::Terminate, action::Impose>;

struct Power
{
  std::string id;
  std::string holder;
  std::string counterparty;
  Prop trigger;
  PowerAction action;
  Loc loc;
  Loc holder_loc;
  Loc counterparty_loc;

  bool operator==(const Power &) const = default;
};

struct SymboleoSpec
{
  std::string name;
  std::vector<Parameter> parameters;
  std::vector<DomainDecl> domain;
  std::vector<Binding> bindings;
  std::vector<WindowDecl> windows;
  std::vector<Obligation> obligations;
  std::vector<Power> powers;

  const Parameter * find_parameter(std::string_view n) const;
  const DomainDecl * find_domain(std::string_view n) const;
  const Binding * find_binding(std::string_view n) const;
  const WindowDecl * find_window(std::string_view n) const;
  const Obligation * find_obligation(std::string_view id) const;
  const Power * find_power(std::string_view id) const;
  // Category of a binding's declared type, if both resolve.
  std::optional<Category> category_of(std::string_view binding) const;
  // Obligations that powers may impose, in declaration order.
  std::vector<const Obligation *> imposable_obligations() const;

  bool operator==(const SymboleoSpec &) const = default;
};

}  // namespace symboleo
