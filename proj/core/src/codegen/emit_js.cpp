#include <string>

#include "symboleo/codegen/generator.hpp"
#include "symboleo/core/printer.hpp"

namespace symboleo::codegen
{

namespace
{

class Js
{
public:
  Js & line(std::string_view s = {})
  {
    if (!s.empty()) {
      out_.append(static_cast<std::size_t>(indent_) * 2, ' ');
      out_ += s;
    }
    out_ += '\n';
    return *this;
  }
  Js & open(std::string_view s)
  {
    line(s);
    ++indent_;
    return *this;
  }
  Js & close(std::string_view s = "}")
  {
    --indent_;
    return line(s);
  }
  std::string str() const { return out_; }

private:
  std::string out_;
  int indent_ = 0;
};

std::string quote(std::string_view s)
{
  std::string out = "'";
  for (char c : s) {
    if (c == '\\' || c == '\'') {
      out += '\\';
    }
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out += c;
  }
  return out + "'";
}

void header(Js & js, const SymboleoSpec & spec)
{
  js.line(
    "// Generated by " + std::string{kGeneratorName} + " " + std::string{kGeneratorVersion} +
    " from Symboleo contract " + spec.name + ".");
  js.line("// Do not edit: regenerate from the specification instead.");
  js.line("'use strict';");
  js.line();
}

std::string base_class(Category c)
{
  switch (c) {
    case Category::Role:
      return "Role";
    case Category::Asset:
      return "Asset";
    case Category::Event:
      return "Event";
  }
  return "Role";
}

std::string folder(Category c)
{
  switch (c) {
    case Category::Role:
      return "roles";
    case Category::Asset:
      return "assets";
    case Category::Event:
      return "events";
  }
  return "roles";
}

std::string js_value(const Value & v)
{
  switch (v.kind) {
    case Value::Kind::Number:
      return format_number(v.number);
    case Value::Kind::String:
      return quote(v.text);
    case Value::Kind::Date:
      return "Time.date(" + quote(format_iso_date(v.date)) + ")";
    case Value::Kind::Param:
      return "this.params." + v.text;
  }
  return "undefined";
}

std::string js_cmp(CmpOp op)
{
  switch (op) {
    case CmpOp::Lt:
      return "<";
    case CmpOp::Le:
      return "<=";
    case CmpOp::Eq:
      return "===";
    case CmpOp::Ge:
      return ">=";
    case CmpOp::Gt:
      return ">";
  }
  return "===";
}

std::string js_interval(const Interval & i)
{
  if (const auto * a = std::get_if<AbsoluteInterval>(&i)) {
    return "Interval.absolute(" + js_value(a->start) + ", " + js_value(a->end) + ")";
  }
  if (const auto * r = std::get_if<RelativeInterval>(&i)) {
    return "Interval.relative(this." + r->anchor + ", " + std::to_string(r->duration.magnitude) + ", " +
           quote(unit_name(r->duration.unit, 2)) + ")";
  }
  return "this.windows." + std::get<NamedInterval>(i).window;
}

// Three-valued predicate expression over the contract (`this`).
std::string js_prop(const Prop & p)
{
  return std::visit(
    [](const auto & n) -> std::string {
      using T = std::decay_t<decltype(n)>;
      if constexpr (std::is_same_v<T, prop::Literal>) {
        return n.value ? "P.TRUE" : "P.FALSE";
      } else if constexpr (std::is_same_v<T, prop::Happens>) {
        return "P.happens(this." + n.event + ")";
      } else if constexpr (std::is_same_v<T, prop::HappensBefore>) {
        return "P.happensBefore(this." + n.event + ", " + js_value(n.time) + ", this.clock)";
      } else if constexpr (std::is_same_v<T, prop::HappensAfter>) {
        return "P.happensAfter(this." + n.event + ", " + js_value(n.time) + ", this.clock)";
      } else if constexpr (std::is_same_v<T, prop::HappensWithin>) {
        return "P.happensWithin(this." + n.event + ", " + js_interval(n.interval) + ", this.clock)";
      } else if constexpr (std::is_same_v<T, prop::Violated>) {
        return "this.obligation(" + quote(n.obligation) + ").violatedState()";
      } else if constexpr (std::is_same_v<T, prop::Fulfilled>) {
        return "this.obligation(" + quote(n.obligation) + ").fulfilledState()";
      } else if constexpr (std::is_same_v<T, prop::AttrCmp>) {
        return "P.someOccurrence(this." + n.event + ", (o) => o." + n.attribute + " " + js_cmp(n.op) + " " +
               js_value(n.value) + ")";
      } else if constexpr (std::is_same_v<T, prop::Not>) {
        return "P.not(" + js_prop(n.operand) + ")";
      } else if constexpr (std::is_same_v<T, prop::And>) {
        return "P.and(" + js_prop(n.lhs) + ", " + js_prop(n.rhs) + ")";
      } else {
        return "P.or(" + js_prop(n.lhs) + ", " + js_prop(n.rhs) + ")";
      }
    },
    p.node());
}

void emit_obligation(Js & js, const Obligation & o, std::string_view target)
{
  js.open(std::string{target} + " = new Obligation(" + quote(o.id) + ", this, {");
  js.line("debtor: this." + o.debtor + ",");
  js.line("creditor: this." + o.creditor + ",");
  js.line("trigger: () => " + js_prop(o.trigger) + ",");
  js.line("consequent: () => " + js_prop(o.consequent) + ",");
  js.close("});");
}

}  // namespace

std::string emit_type_class(const SymboleoSpec & spec, const DomainDecl & decl)
{
  const std::string base = base_class(decl.category);
  Js js;
  header(js, spec);
  js.line("const { " + base + " } = require('symboleo-js-core');");
  js.line();
  js.open("const ATTRIBUTES = [");
  for (const auto & a : decl.attributes) {
    js.line("{ name: " + quote(a.name) + ", kind: " + quote(to_string(a.kind)) + " },");
  }
  js.close("];");
  js.line();
  js.open("class " + decl.name + " extends " + base + " {");
  js.open("constructor(_name, fields = {}) {");
  js.line("super(_name, " + quote(decl.name) + ");");
  for (const auto & a : decl.attributes) {
    js.line("this." + a.name + " = fields." + a.name + ";");
  }
  js.close();
  js.line();
  js.open("static get attributes() {");
  js.line("return ATTRIBUTES;");
  js.close();
  js.line();
  js.open("checkFields(fields) {");
  js.line("return " + base + ".checkFields(ATTRIBUTES, fields, this);");
  js.close();
  js.line();
  js.open("toJSON() {");
  js.open("return {");
  js.line("_name: this._name,");
  js.line("_type: this._type,");
  for (const auto & a : decl.attributes) {
    js.line(a.name + ": this." + a.name + ",");
  }
  if (decl.category == Category::Event) {
    js.line("_occurrences: this.occurrences(),");
  }
  js.close("};");
  js.close();
  js.line();
  js.open("static fromJSON(obj) {");
  js.open("const instance = new " + decl.name + "(obj._name, {");
  for (const auto & a : decl.attributes) {
    js.line(a.name + ": obj." + a.name + ",");
  }
  js.close("});");
  if (decl.category == Category::Event) {
    js.line("instance.restoreOccurrences(obj._occurrences || []);");
  }
  js.line("return instance;");
  js.close();
  js.close();
  js.line();
  js.line("module.exports = { " + decl.name + " };");
  return js.str();
}

std::string emit_router(const SymboleoSpec & spec)
{
  std::vector<const Binding *> events;
  for (const auto & b : spec.bindings) {
    if (spec.category_of(b.name) == Category::Event) {
      events.push_back(&b);
    }
  }

  Js js;
  header(js, spec);
  js.line("const { ContractError, Router } = require('symboleo-js-core');");
  js.line();
  js.line("// Event management: one transaction handler per declared event.");
  js.open("class EventRouter extends Router {");
  js.open("route(eventName, timestamp, fields) {");
  js.open("switch (eventName) {");
  for (const Binding * b : events) {
    js.open("case " + quote(b->name) + ":");
    js.line("return this.on_" + b->name + "(timestamp, fields);");
    js.close("");
  }
  js.open("default:");
  js.line("throw new ContractError('E803', `unknown event ${eventName}`);");
  js.close("");
  js.close();
  js.close();
  for (const Binding * b : events) {
    js.line();
    js.open("on_" + b->name + "(timestamp, fields) {");
    js.line("const evt = this.contract." + b->name + ";");
    js.line("evt.checkFields(fields);");
    js.line("this.contract.advanceTo(timestamp);");
    js.line("evt.happen(timestamp, fields);");
    js.line("return this.contract.evaluate();");
    js.close();
  }
  js.line();
  js.open("exert(powerId, timestamp) {");
  js.open("switch (powerId) {");
  for (const auto & p : spec.powers) {
    js.open("case " + quote(p.id) + ":");
    js.line("return this.contract.exert_" + p.id + "(timestamp);");
    js.close("");
  }
  js.open("default:");
  js.line("throw new ContractError('E804', `unknown power ${powerId}`);");
  js.close("");
  js.close();
  js.close();
  js.close();
  js.line();
  js.line("module.exports = { EventRouter };");
  return js.str();
}

std::string emit_contract(const SymboleoSpec & spec)
{
  Js js;
  header(js, spec);
  js.line("const {");
  js.line("  Contract, Obligation, Power, Predicates: P, Interval, Time,");
  js.line("} = require('symboleo-js-core');");
  for (const auto & d : spec.domain) {
    js.line(
      "const { " + d.name + " } = require('./" + folder(d.category) + "/" + d.name + ".js');");
  }
  js.line("const { EventRouter } = require('./router.js');");
  js.line();

  js.open("const PARAMETERS = [");
  for (const auto & p : spec.parameters) {
    js.line("{ name: " + quote(p.name) + ", kind: " + quote(to_string(p.kind)) + " },");
  }
  js.close("];");
  js.line();

  js.open("class " + spec.name + " extends Contract {");
  js.open("constructor(id, args) {");
  js.line("super(id, " + quote(spec.name) + ");");
  js.line("this.params = Contract.bindParameters(PARAMETERS, args);");
  for (Category cat : {Category::Role, Category::Asset, Category::Event}) {
    for (const auto & b : spec.bindings) {
      if (spec.category_of(b.name) != cat) {
        continue;
      }
      if (b.assignments.empty()) {
        js.line("this." + b.name + " = new " + b.type + "(" + quote(b.name) + ");");
        continue;
      }
      js.open("this." + b.name + " = new " + b.type + "(" + quote(b.name) + ", {");
      for (const auto & a : b.assignments) {
        js.line(a.attribute + ": " + js_value(a.value) + ",");
      }
      js.close("});");
    }
  }
  js.line("this.windows = {};");
  for (const auto & w : spec.windows) {
    js.line(
      "this.windows." + w.name + " = Interval.relative(this." + w.anchor + ", " +
      std::to_string(w.duration.magnitude) + ", " + quote(unit_name(w.duration.unit, 2)) + ");");
  }
  js.line("this.router = new EventRouter(this);");
  js.line("this.registerObligations();");
  js.line("this.registerPowers();");
  js.close();
  js.line();

  js.open("registerObligations() {");
  for (const auto & o : spec.obligations) {
    emit_obligation(js, o, "this.obligations." + o.id);
  }
  js.close();
  js.line();

  js.open("registerPowers() {");
  for (const auto & p : spec.powers) {
    js.open("this.powers." + p.id + " = new Power(" + quote(p.id) + ", this, {");
    js.line("holder: this." + p.holder + ",");
    js.line("counterparty: this." + p.counterparty + ",");
    js.line("trigger: () => " + js_prop(p.trigger) + ",");
    js.open("action: () => {");
    if (const auto * s = std::get_if<action::Suspend>(&p.action)) {
      for (const auto & t : s->targets) {
        js.line("this.obligations." + t + ".suspend();");
      }
    } else if (const auto * r = std::get_if<action::Resume>(&p.action)) {
      for (const auto & t : r->targets) {
        js.line("this.obligations." + t + ".resume();");
      }
    } else if (std::holds_alternative<action::Terminate>(p.action)) {
      js.line("this.terminate();");
    } else {
      const auto & o = std::get<action::Impose>(p.action).obligation;
      emit_obligation(js, o, "this.obligations." + o.id);
      js.line("this.obligations." + o.id + ".activate();");
    }
    js.close("},");
    js.close("});");
  }
  js.close();
  for (const auto & p : spec.powers) {
    js.line();
    js.open("exert_" + p.id + "(timestamp) {");
    js.line("this.advanceTo(timestamp);");
    js.line("return this.exert(" + quote(p.id) + ");");
    js.close();
  }
  js.close();
  js.line();
  js.line("module.exports = { " + spec.name + ", PARAMETERS };");
  return js.str();
}

}  // namespace symboleo::codegen
