#include "symboleo/core/printer.hpp"

#include <charconv>
#include <sstream>

namespace symboleo
{

namespace
{

// Binding strength: or < and < not/atom.
int precedence(const Prop & p)
{
  if (std::holds_alternative<prop::Or>(p.node())) {
    return 1;
  }
  if (std::holds_alternative<prop::And>(p.node())) {
    return 2;
  }
  return 3;
}

void print_prop(std::ostream & os, const Prop & p);

void print_operand(std::ostream & os, const Prop & child, int parent_prec, bool right)
{
  const int prec = precedence(child);
  const bool parens = prec < parent_prec || (right && prec == parent_prec);
  if (parens) {
    os << '(';
  }
  print_prop(os, child);
  if (parens) {
    os << ')';
  }
}

struct PropPrinter
{
  std::ostream & os;

  void operator()(const prop::Literal & l) const { os << (l.value ? "true" : "false"); }
  void operator()(const prop::Happens & h) const { os << "Happens(" << h.event << ')'; }
  void operator()(const prop::HappensBefore & h) const
  {
    os << "HappensBefore(" << h.event << ", " << print(h.time) << ')';
  }
  void operator()(const prop::HappensAfter & h) const
  {
    os << "HappensAfter(" << h.event << ", " << print(h.time) << ')';
  }
  void operator()(const prop::HappensWithin & h) const
  {
    os << "HappensWithin(" << h.event << ", " << print(h.interval) << ')';
  }
  void operator()(const prop::Violated & v) const { os << "Violated(" << v.obligation << ')'; }
  void operator()(const prop::Fulfilled & f) const { os << "Fulfilled(" << f.obligation << ')'; }
  void operator()(const prop::AttrCmp & c) const
  {
    os << c.event << '.' << c.attribute << ' ' << to_string(c.op) << ' ' << print(c.value);
  }
  void operator()(const prop::Not & n) const
  {
    os << "not ";
    print_operand(os, n.operand, 3, false);
  }
  void operator()(const prop::And & a) const
  {
    print_operand(os, a.lhs, 2, false);
    os << " and ";
    print_operand(os, a.rhs, 2, true);
  }
  void operator()(const prop::Or & o) const
  {
    print_operand(os, o.lhs, 1, false);
    os << " or ";
    print_operand(os, o.rhs, 1, true);
  }
};

void print_prop(std::ostream & os, const Prop & p) { std::visit(PropPrinter{os}, p.node()); }

std::string quote(const std::string & s)
{
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') {
      out.push_back('\\');
      out.push_back(c);
    } else if (c == '\n') {
      out += "\\n";
    } else {
      out.push_back(c);
    }
  }
  out.push_back('"');
  return out;
}

std::string print_obligation(const Obligation & o)
{
  return o.id + " : Obligation(" + o.debtor + ", " + o.creditor + ", " + print(o.trigger) +
         ", " + print(o.consequent) + ")";
}

std::string join(const std::vector<std::string> & items)
{
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    out += (i ? ", " : "") + items[i];
  }
  return out;
}

}  // namespace

std::string format_number(double n)
{
  // fixed notation: the lexer has no exponent syntax
  char buf[400];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, n, std::chars_format::fixed);
  return std::string(buf, ptr);
}

std::string print(const Value & v)
{
  switch (v.kind) {
    case Value::Kind::Number:
      return format_number(v.number);
    case Value::Kind::String:
      return quote(v.text);
    case Value::Kind::Date:
      return format_iso_date(v.date);
    case Value::Kind::Param:
      return v.text;
  }
  return {};
}

std::string print(const Duration & d)
{
  return std::to_string(d.magnitude) + " " + std::string{unit_name(d.unit, d.magnitude)};
}

std::string print(const Interval & i)
{
  if (const auto * a = std::get_if<AbsoluteInterval>(&i)) {
    return "Interval(" + print(a->start) + ", " + print(a->end) + ")";
  }
  if (const auto * r = std::get_if<RelativeInterval>(&i)) {
    return "RelativeTo(" + r->anchor + ", " + print(r->duration) + ")";
  }
  return std::get<NamedInterval>(i).window;
}

std::string print(const Prop & p)
{
  std::ostringstream os;
  print_prop(os, p);
  return os.str();
}

std::string print(const PowerAction & a)
{
  if (const auto * s = std::get_if<action::Suspend>(&a)) {
    return "Suspend(" + join(s->targets) + ")";
  }
  if (const auto * r = std::get_if<action::Resume>(&a)) {
    return "Resume(" + join(r->targets) + ")";
  }
  if (std::holds_alternative<action::Terminate>(a)) {
    return "Terminate";
  }
  return "Impose(" + print_obligation(std::get<action::Impose>(a).obligation) + ")";
}

std::string print(const SymboleoSpec & spec)
{
  std::ostringstream os;
  os << "Contract " << spec.name << "\n\n";

  os << "Parameters\n";
  for (const auto & p : spec.parameters) {
    os << "  " << p.name << " : " << (p.role_type.empty() ? to_string(p.kind) : p.role_type)
       << ";\n";
  }

  os << "\nDomain\n";
  for (const auto & d : spec.domain) {
    os << "  " << d.name << " isA " << to_string(d.category);
    for (std::size_t i = 0; i < d.attributes.size(); ++i) {
      os << (i ? ", " : " with ") << d.attributes[i].name << " : "
         << to_string(d.attributes[i].kind);
    }
    os << ";\n";
  }

  os << "\nDeclarations\n";
  for (const auto & b : spec.bindings) {
    os << "  " << b.name << " : " << b.type;
    if (b.signature) {
      os << " as (" << b.signature->subject << ", " << b.signature->verb;
      if (!b.signature->object.empty()) {
        os << ", " << b.signature->object;
      }
      os << ')';
    }
    for (std::size_t i = 0; i < b.assignments.size(); ++i) {
      os << (i ? ", " : " with ") << b.assignments[i].attribute << " := "
         << print(b.assignments[i].value);
    }
    os << ";\n";
  }
  for (const auto & w : spec.windows) {
    os << "  " << w.name << " : Window(" << w.anchor << ", " << print(w.duration) << ");\n";
  }

  os << "\nObligations\n";
  for (const auto & o : spec.obligations) {
    os << "  " << print_obligation(o) << ";\n";
  }

  os << "\nPowers\n";
  for (const auto & p : spec.powers) {
    os << "  " << p.id << " : Power(" << p.holder << ", " << p.counterparty << ", "
       << print(p.trigger) << ", " << print(p.action) << ");\n";
  }

  os << "\nendContract\n";
  return os.str();
}

}  // namespace symboleo
