#include "symboleo/cnl/refine.hpp"

#include <algorithm>

#include "symboleo/common/error.hpp"
#include "symboleo/core/printer.hpp"
#include "symboleo/core/validator.hpp"

namespace symboleo::cnl
{

namespace
{

// Places `item` right after the last element whose name sorts at or before
// it, so refinements touching different slots commute.
template <typename T, typename NameOf>
void insert_ordered(std::vector<T> & items, T item, NameOf name_of)
{
  const std::string key = name_of(item);
  std::size_t at = 0;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (name_of(items[i]) <= key) {
      at = i + 1;
    }
  }
  items.insert(items.begin() + static_cast<std::ptrdiff_t>(at), std::move(item));
}

struct Rewriter
{
  tmpl::TemplatePair pair;
  std::vector<ResolvedEvent> resolved;

  Obligation & obligation(const std::string & id)
  {
    for (auto & o : pair.spec.obligations) {
      if (o.id == id) {
        return o;
      }
    }
    throw Error(codes::kSlotMissingObligation, "slot obligation '" + id + "' is not in the spec");
  }

  // Date literal, or a Date parameter named by the placeholder (added to
  // spec and template when missing).
  Value date_value(const CnlDate & d)
  {
    if (d.date) {
      return Value::of_date(*d.date);
    }
    const std::string & name = d.placeholder;
    if (const Parameter * p = pair.spec.find_parameter(name)) {
      if (p->kind != ParamKind::Date) {
        throw Error(
          codes::kRuleInapplicable, "placeholder [" + name + "] names parameter '" + name + "' of kind " +
                                      std::string{to_string(p->kind)} + ", not Date");
      }
    } else {
      if (pair.spec.find_binding(name) != nullptr || pair.spec.find_window(name) != nullptr) {
        throw Error(codes::kRuleInapplicable, "placeholder [" + name + "] clashes with declaration '" + name + "'");
      }
      Parameter added;
      added.name = name;
      added.kind = ParamKind::Date;
      insert_ordered(pair.spec.parameters, added, [](const Parameter & x) { return x.name; });
    }
    if (const tmpl::TemplateParameter * tp = pair.tmpl.find_parameter(name)) {
      if (tp->kind != ParamKind::Date) {
        throw Error(codes::kRuleInapplicable, "template parameter '" + name + "' is not a Date");
      }
    } else {
      insert_ordered(
        pair.tmpl.parameters, tmpl::TemplateParameter{name, ParamKind::Date},
        [](const tmpl::TemplateParameter & x) { return x.name; });
    }
    pair.param_map.emplace(name, name);
    return Value::of_param(name);
  }

  std::string event_for(const EventPhrase & phrase)
  {
    ResolvedEvent r = resolve_event_phrase(phrase, pair.spec, pair.tmpl.lexicon);
    for (const auto & d : r.new_domain) {
      insert_ordered(pair.spec.domain, d, [](const DomainDecl & x) { return x.name; });
    }
    for (const auto & b : r.new_bindings) {
      insert_ordered(pair.spec.bindings, b, [](const Binding & x) { return x.name; });
    }
    resolved.push_back(r);
    return r.binding;
  }

  std::string fresh_window_name(const std::string & obligation_id) const
  {
    const std::string base = "win_" + obligation_id;
    std::string name = base;
    for (int k = 2; pair.spec.find_binding(name) != nullptr || pair.spec.find_window(name) != nullptr ||
                    pair.spec.find_parameter(name) != nullptr;
         ++k) {
      name = base + "_" + std::to_string(k);
    }
    return name;
  }

  void temporal(const std::string & obligation_id, const Form & f)
  {
    const Obligation & o = obligation(obligation_id);
    const auto * happens = std::get_if<prop::Happens>(&o.consequent.node());
    if (happens == nullptr) {
      throw Error(
        codes::kRuleInapplicable,
        "temporal refinement needs a consequent of the form Happens(e); " + o.id + " has " + print(o.consequent));
    }
    const std::string event = happens->event;
    Prop consequent;
    if (const auto * b = std::get_if<form::Before>(&f)) {
      consequent = Prop{prop::HappensBefore{event, date_value(b->date), {}}};
    } else if (const auto * a = std::get_if<form::After>(&f)) {
      consequent = Prop{prop::HappensAfter{event, date_value(a->date), {}}};
    } else if (const auto * w = std::get_if<form::Between>(&f)) {
      Value start = date_value(w->start);
      Value end = date_value(w->end);
      consequent = Prop{prop::HappensWithin{event, AbsoluteInterval{start, end}, {}}};
    } else {
      const auto & within = std::get<form::WithinOf>(f);
      const std::string anchor = event_for(within.phrase);
      if (anchor == event) {
        throw Error(codes::kRuleInapplicable, "window anchor '" + anchor + "' is the obligation's own event");
      }
      WindowDecl win;
      win.name = fresh_window_name(obligation_id);
      win.anchor = anchor;
      win.duration = within.duration;
      insert_ordered(pair.spec.windows, win, [](const WindowDecl & x) { return x.name; });
      consequent = Prop{prop::HappensWithin{event, NamedInterval{win.name, {}}, {}}};
    }
    obligation(obligation_id).consequent = consequent;
  }

  void conditional(const std::string & obligation_id, const form::If & f)
  {
    const Obligation & o = obligation(obligation_id);
    const auto * lit = std::get_if<prop::Literal>(&o.trigger.node());
    if (lit == nullptr || !lit->value) {
      throw Error(
        codes::kConditionalOnTriggered,
        "obligation " + o.id + " already has trigger " + print(o.trigger) + "; a condition needs trigger true");
    }
    const std::string event = event_for(f.phrase);
    obligation(obligation_id).trigger = make_happens(event);
  }
};

std::string template_adjunct(const Form & f)
{
  std::string text = surface(f);
  // [START_DATE] -> <START_DATE> so instantiation fills it in.
  for (auto pos = text.find('['); pos != std::string::npos; pos = text.find('[', pos)) {
    const auto close = text.find(']', pos);
    if (close == std::string::npos) {
      break;
    }
    text[pos] = '<';
    text[close] = '>';
  }
  return text;
}

}  // namespace

RefinementResult apply_refinement(const tmpl::TemplatePair & pair, const CnlRefinement & r)
{
  const tmpl::RefinementSlot * slot = pair.tmpl.find_slot(r.slot);
  if (slot == nullptr) {
    throw Error(codes::kUnknownSlot, "unknown refinement slot '" + r.slot + "'");
  }
  const bool temporal = is_temporal(r.form);
  const auto state = pair.slots.find(r.slot);
  if (state != pair.slots.end() && (temporal ? state->second.temporal : state->second.conditional)) {
    throw Error(
      codes::kSlotAlreadyRefined,
      "slot " + r.slot + " already has a " + (temporal ? "temporal" : "conditional") + " refinement");
  }

  Rewriter rw{pair, {}};
  const std::string obligation_id = slot->obligation;
  if (temporal) {
    rw.temporal(obligation_id, r.form);
  } else {
    rw.conditional(obligation_id, std::get<form::If>(r.form));
  }
  tmpl::insert_adjunct(rw.pair.tmpl, r.slot, template_adjunct(r.form));
  tmpl::record_refinement(rw.pair, r.slot, temporal);

  const auto diags = validate(rw.pair.spec);
  if (has_errors(diags)) {
    throw Error(codes::kRuleInapplicable, "refinement yields an invalid spec: " + diags.front().message);
  }

  RefinementResult out;
  out.spec_delta = loc::diff_lines(print(pair.spec), print(rw.pair.spec));
  out.template_text = tmpl::render_template(rw.pair.tmpl);
  out.resolved_events = std::move(rw.resolved);
  out.pair = std::move(rw.pair);
  return out;
}

std::vector<ScriptLine> parse_script(std::string_view script)
{
  std::vector<ScriptLine> out;
  int line_no = 0;
  std::size_t start = 0;
  while (start <= script.size()) {
    std::size_t end = script.find('\n', start);
    if (end == std::string_view::npos) {
      end = script.size();
    }
    ++line_no;
    std::string_view line = script.substr(start, end - start);
    start = end + 1;
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t')) {
      line.remove_suffix(1);
    }
    while (!line.empty() && (line.front() == ' ' || line.front() == '\t')) {
      line.remove_prefix(1);
    }
    if (line.empty() || line.front() == '#') {
      continue;
    }
    const auto colon = line.find(':');
    if (colon == std::string_view::npos || colon == 0) {
      throw Error(
        codes::kNotInCnl, "line " + std::to_string(line_no) + ": expected '<slot>: <refinement>'");
    }
    std::string_view slot = line.substr(0, colon);
    while (!slot.empty() && slot.back() == ' ') {
      slot.remove_suffix(1);
    }
    std::string_view text = line.substr(colon + 1);
    while (!text.empty() && text.front() == ' ') {
      text.remove_prefix(1);
    }
    out.push_back({std::string{slot}, std::string{text}, line_no});
  }
  return out;
}

RefinementResult apply_script(const tmpl::TemplatePair & pair, const std::vector<ScriptLine> & lines)
{
  RefinementResult acc;
  acc.pair = pair;
  acc.template_text = tmpl::render_template(pair.tmpl);
  for (const auto & l : lines) {
    const ParseCnlResult parsed = parse_cnl(l.text, acc.pair, l.slot);
    if (!parsed.refinement) {
      const Diagnostic & d = parsed.diagnostics.front();
      throw Error(d.code, "line " + std::to_string(l.line) + ": " + d.message);
    }
    RefinementResult step = apply_refinement(acc.pair, *parsed.refinement);
    acc.pair = std::move(step.pair);
    acc.template_text = std::move(step.template_text);
    acc.resolved_events.insert(acc.resolved_events.end(), step.resolved_events.begin(), step.resolved_events.end());
  }
  acc.spec_delta = loc::diff_lines(print(pair.spec), print(acc.pair.spec));
  return acc;
}

}  // namespace symboleo::cnl
