#include "symboleo/core/ast.hpp"

#include <algorithm>

namespace symboleo
{

std::string_view to_string(ParamKind kind)
{
  switch (kind) {
    case ParamKind::Date:
      return "Date";
    case ParamKind::Party:
      return "Party";
    case ParamKind::Number:
      return "Number";
    case ParamKind::Money:
      return "Money";
    case ParamKind::Percentage:
      return "Percentage";
    case ParamKind::String:
      return "String";
  }
  return "String";
}

std::string_view to_string(Category category)
{
  switch (category) {
    case Category::Role:
      return "Role";
    case Category::Asset:
      return "Asset";
    case Category::Event:
      return "Event";
  }
  return "Role";
}

std::string_view to_string(AttrKind kind)
{
  switch (kind) {
    case AttrKind::Number:
      return "Number";
    case AttrKind::Date:
      return "Date";
    case AttrKind::String:
      return "String";
  }
  return "String";
}

std::string_view to_string(CmpOp op)
{
  switch (op) {
    case CmpOp::Lt:
      return "<";
    case CmpOp::Le:
      return "<=";
    case CmpOp::Eq:
      return "=";
    case CmpOp::Ge:
      return ">=";
    case CmpOp::Gt:
      return ">";
  }
  return "=";
}

std::optional<ParamKind> param_kind_from(std::string_view text)
{
  for (auto k : {ParamKind::Date, ParamKind::Party, ParamKind::Number, ParamKind::Money,
                 ParamKind::Percentage, ParamKind::String}) {
    if (to_string(k) == text) {
      return k;
    }
  }
  return std::nullopt;
}

std::optional<AttrKind> attr_kind_from(std::string_view text)
{
  for (auto k : {AttrKind::Number, AttrKind::Date, AttrKind::String}) {
    if (to_string(k) == text) {
      return k;
    }
  }
  return std::nullopt;
}

std::optional<Category> category_from(std::string_view text)
{
  for (auto c : {Category::Role, Category::Asset, Category::Event}) {
    if (to_string(c) == text) {
      return c;
    }
  }
  return std::nullopt;
}

AttrKind value_kind_of(ParamKind kind)
{
  switch (kind) {
    case ParamKind::Date:
      return AttrKind::Date;
    case ParamKind::Number:
    case ParamKind::Money:
    case ParamKind::Percentage:
      return AttrKind::Number;
    case ParamKind::Party:
    case ParamKind::String:
      return AttrKind::String;
  }
  return AttrKind::String;
}

const Attribute * DomainDecl::find_attribute(std::string_view attr) const
{
  auto it = std::find_if(
    attributes.begin(), attributes.end(), [&](const Attribute & a) { return a.name == attr; });
  return it == attributes.end() ? nullptr : &*it;
}

Value Value::of_number(double n)
{
  Value v;
  v.kind = Kind::Number;
  v.number = n;
  return v;
}

Value Value::of_string(std::string s)
{
  Value v;
  v.kind = Kind::String;
  v.text = std::move(s);
  return v;
}

Value Value::of_date(Date d)
{
  Value v;
  v.kind = Kind::Date;
  v.date = d;
  return v;
}

Value Value::of_param(std::string name)
{
  Value v;
  v.kind = Kind::Param;
  v.text = std::move(name);
  return v;
}

Prop::Prop() : node_(std::make_shared<const PropNode>(prop::Literal{true})) {}

Prop::Prop(PropNode node, Span span)
: node_(std::make_shared<const PropNode>(std::move(node))), span_(span)
{
}

bool operator==(const Prop & a, const Prop & b)
{
  return a.node_ == b.node_ ||
         static_cast<const PropNode::variant &>(*a.node_) ==
           static_cast<const PropNode::variant &>(*b.node_);
}

Prop make_true() { return Prop{prop::Literal{true}}; }

Prop make_happens(std::string event) { return Prop{prop::Happens{std::move(event), {}}}; }

namespace
{
template <typename Range, typename Key>
auto find_named(const Range & range, std::string_view name, Key key)
  -> decltype(&*range.begin())
{
  auto it = std::find_if(range.begin(), range.end(), [&](const auto & x) { return key(x) == name; });
  return it == range.end() ? nullptr : &*it;
}
}  // namespace

const Parameter * SymboleoSpec::find_parameter(std::string_view n) const
{
  return find_named(parameters, n, [](const Parameter & p) { return p.name; });
}

const DomainDecl * SymboleoSpec::find_domain(std::string_view n) const
{
  return find_named(domain, n, [](const DomainDecl & d) { return d.name; });
}

const Binding * SymboleoSpec::find_binding(std::string_view n) const
{
  return find_named(bindings, n, [](const Binding & b) { return b.name; });
}

const WindowDecl * SymboleoSpec::find_window(std::string_view n) const
{
  return find_named(windows, n, [](const WindowDecl & w) { return w.name; });
}

const Obligation * SymboleoSpec::find_obligation(std::string_view id) const
{
  return find_named(obligations, id, [](const Obligation & o) { return o.id; });
}

const Power * SymboleoSpec::find_power(std::string_view id) const
{
  return find_named(powers, id, [](const Power & p) { return p.id; });
}

std::optional<Category> SymboleoSpec::category_of(std::string_view binding) const
{
  const Binding * b = find_binding(binding);
  if (b == nullptr) {
    return std::nullopt;
  }
  const DomainDecl * d = find_domain(b->type);
  if (d == nullptr) {
    return std::nullopt;
  }
  return d->category;
}

std::vector<const Obligation *> SymboleoSpec::imposable_obligations() const
{
  std::vector<const Obligation *> out;
  for (const Power & p : powers) {
    if (const auto * imp = std::get_if<action::Impose>(&p.action)) {
      out.push_back(&imp->obligation);
    }
  }
  return out;
}

}  // namespace symboleo
