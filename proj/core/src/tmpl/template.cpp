#include "symboleo/tmpl/template.hpp"

#include <algorithm>
#include <regex>
#include <set>

#include <nlohmann/json.hpp>

#include "symboleo/common/error.hpp"

namespace symboleo::tmpl
{

namespace
{

Diagnostic error(std::string_view code, std::string message)
{
  return Diagnostic{Severity::Error, std::string{code}, Span{}, std::move(message)};
}

bool is_ident_start(char c)
{
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_';
}

bool is_ident_char(char c)
{
  return is_ident_start(c) || (c >= '0' && c <= '9');
}

std::string marker(std::string_view slot)
{
  return "[" + std::string{slot} + "]";
}

// Removes every slot marker plus the single space in front of it.
std::string strip_markers(std::string text, const std::vector<RefinementSlot> & slots)
{
  for (const auto & s : slots) {
    const std::string m = marker(s.id);
    for (auto pos = text.find(m); pos != std::string::npos; pos = text.find(m, pos)) {
      std::size_t from = pos;
      if (from > 0 && text[from - 1] == ' ') {
        --from;
      }
      text.erase(from, pos + m.size() - from);
      pos = from;
    }
  }
  return text;
}

std::string substitute(std::string_view text, const std::map<std::string, std::string> & values)
{
  std::string out;
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] == '<' && i + 1 < text.size() && is_ident_start(text[i + 1])) {
      std::size_t j = i + 1;
      while (j < text.size() && is_ident_char(text[j])) {
        ++j;
      }
      if (j < text.size() && text[j] == '>') {
        auto it = values.find(std::string{text.substr(i + 1, j - i - 1)});
        if (it != values.end()) {
          out += it->second;
          i = j + 1;
          continue;
        }
      }
    }
    out += text[i++];
  }
  return out;
}

}  // namespace

const TemplateParameter * ContractTemplate::find_parameter(std::string_view n) const
{
  for (const auto & p : parameters) {
    if (p.name == n) {
      return &p;
    }
  }
  return nullptr;
}

const RefinementSlot * ContractTemplate::find_slot(std::string_view id) const
{
  for (const auto & s : slots) {
    if (s.id == id) {
      return &s;
    }
  }
  return nullptr;
}

std::vector<std::string> default_lexicon()
{
  return {"pay", "dispatch", "deliver", "inspect"};
}

std::vector<std::string> placeholders_in(std::string_view text)
{
  std::vector<std::string> out;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] != '<' || i + 1 >= text.size() || !is_ident_start(text[i + 1])) {
      continue;
    }
    std::size_t j = i + 1;
    while (j < text.size() && is_ident_char(text[j])) {
      ++j;
    }
    if (j < text.size() && text[j] == '>') {
      std::string name{text.substr(i + 1, j - i - 1)};
      if (std::find(out.begin(), out.end(), name) == out.end()) {
        out.push_back(std::move(name));
      }
      i = j;
    }
  }
  return out;
}

std::vector<Diagnostic> check_template(const ContractTemplate & t)
{
  std::vector<Diagnostic> out;
  if (t.name.empty()) {
    out.push_back(error(codes::kTemplateInvalid, "template has no name"));
  }

  std::set<std::string> declared;
  for (const auto & p : t.parameters) {
    if (p.name.empty() || !std::all_of(p.name.begin(), p.name.end(), is_ident_char) ||
        !is_ident_start(p.name.front())) {
      out.push_back(error(codes::kTemplateInvalid, "invalid parameter name '" + p.name + "'"));
    } else if (!declared.insert(p.name).second) {
      out.push_back(error(codes::kTemplateInvalid, "duplicate template parameter '" + p.name + "'"));
    }
  }

  auto check_text = [&](std::string_view text, const std::string & where) {
    for (const auto & ph : placeholders_in(text)) {
      if (!declared.count(ph)) {
        out.push_back(error(
          codes::kTemplateInvalid, where + " uses undeclared placeholder <" + ph + ">"));
      }
    }
  };
  check_text(t.preamble, "preamble");
  for (std::size_t i = 0; i < t.clauses.size(); ++i) {
    check_text(t.clauses[i], "clause " + std::to_string(i));
  }

  std::set<std::string> ids;
  for (const auto & s : t.slots) {
    if (!ids.insert(s.id).second) {
      out.push_back(error(codes::kTemplateInvalid, "duplicate slot '" + s.id + "'"));
      continue;
    }
    if (s.clause >= t.clauses.size()) {
      out.push_back(error(
        codes::kTemplateInvalid,
        "slot " + s.id + " refers to clause " + std::to_string(s.clause) + ", which does not exist"));
      continue;
    }
    const std::string m = marker(s.id);
    const std::string & clause = t.clauses[s.clause];
    if (s.anchor + m.size() > clause.size() || clause.compare(s.anchor, m.size(), m) != 0) {
      out.push_back(error(
        codes::kTemplateInvalid, "slot " + s.id + ": marker " + m + " not found at anchor " +
                                   std::to_string(s.anchor)));
    }
  }

  // Every marker-looking token must belong to a slot.
  static const std::regex kMarker{R"(\[(P[0-9]+)\])"};
  for (std::size_t i = 0; i < t.clauses.size(); ++i) {
    for (std::sregex_iterator it{t.clauses[i].begin(), t.clauses[i].end(), kMarker}, end;
         it != end; ++it) {
      const RefinementSlot * s = t.find_slot((*it)[1].str());
      if (s == nullptr || s->clause != i) {
        out.push_back(error(
          codes::kTemplateInvalid,
          "clause " + std::to_string(i) + " has marker " + (*it)[0].str() + " without a slot"));
      }
    }
  }
  return out;
}

ContractTemplate template_from_json(const nlohmann::json & j)
{
  ContractTemplate t;
  try {
    t.name = j.at("name").get<std::string>();
    t.preamble = j.value("preamble", std::string{});
    t.clauses = j.at("clauses").get<std::vector<std::string>>();
    for (const auto & p : j.at("parameters")) {
      const auto kind_text = p.at("kind").get<std::string>();
      const auto kind = param_kind_from(kind_text);
      if (!kind) {
        throw Error(codes::kTemplateInvalid, "unknown parameter kind '" + kind_text + "'");
      }
      t.parameters.push_back({p.at("name").get<std::string>(), *kind});
    }
    for (const auto & s : j.value("slots", nlohmann::json::array())) {
      t.slots.push_back(
        {s.at("id").get<std::string>(), s.at("clause").get<std::size_t>(),
         s.at("anchor").get<std::size_t>(), s.at("obligation").get<std::string>()});
    }
    t.lexicon = j.contains("lexicon") ? j.at("lexicon").get<std::vector<std::string>>()
                                      : default_lexicon();
  } catch (const nlohmann::json::exception & e) {
    throw Error(codes::kTemplateInvalid, std::string{"malformed template: "} + e.what());
  }
  const auto diags = check_template(t);
  if (!diags.empty()) {
    throw Error(codes::kTemplateInvalid, diags.front().message);
  }
  return t;
}

nlohmann::json to_json(const ContractTemplate & t)
{
  nlohmann::json j;
  j["name"] = t.name;
  j["preamble"] = t.preamble;
  j["clauses"] = t.clauses;
  j["parameters"] = nlohmann::json::array();
  for (const auto & p : t.parameters) {
    j["parameters"].push_back({{"name", p.name}, {"kind", std::string{to_string(p.kind)}}});
  }
  j["slots"] = nlohmann::json::array();
  for (const auto & s : t.slots) {
    j["slots"].push_back(
      {{"id", s.id}, {"clause", s.clause}, {"anchor", s.anchor}, {"obligation", s.obligation}});
  }
  j["lexicon"] = t.lexicon;
  return j;
}

std::map<std::string, std::string> identity_map(const ContractTemplate & t)
{
  std::map<std::string, std::string> m;
  for (const auto & p : t.parameters) {
    m.emplace(p.name, p.name);
  }
  return m;
}

BindResult bind_pair(
  const ContractTemplate & t, const SymboleoSpec & spec,
  const std::map<std::string, std::string> & param_map)
{
  BindResult r;
  r.diagnostics = check_template(t);

  for (const auto & p : t.parameters) {
    auto it = param_map.find(p.name);
    if (it == param_map.end()) {
      r.diagnostics.push_back(
        error(codes::kUnmappedParameter, "template parameter '" + p.name + "' is not mapped"));
      continue;
    }
    const Parameter * sp = spec.find_parameter(it->second);
    if (sp == nullptr) {
      r.diagnostics.push_back(error(
        codes::kUnmappedParameter, "template parameter '" + p.name + "' maps to '" + it->second +
                                     "', which the spec does not declare"));
      continue;
    }
    if (sp->kind != p.kind) {
      r.diagnostics.push_back(error(
        codes::kParameterKindMismatch,
        "template parameter '" + p.name + "' is " + std::string{to_string(p.kind)} +
          " but spec parameter '" + sp->name + "' is " + std::string{to_string(sp->kind)}));
    }
  }
  for (const auto & [from, to] : param_map) {
    if (t.find_parameter(from) == nullptr) {
      r.diagnostics.push_back(error(
        codes::kUnmappedParameter, "mapping names unknown template parameter '" + from + "'"));
    }
  }
  for (const auto & s : t.slots) {
    if (spec.find_obligation(s.obligation) == nullptr) {
      r.diagnostics.push_back(error(
        codes::kSlotMissingObligation,
        "slot " + s.id + " refines '" + s.obligation + "', which the spec does not declare"));
    }
  }

  if (r.diagnostics.empty()) {
    TemplatePair pair{t, spec, param_map, {}};
    for (const auto & s : t.slots) {
      pair.slots.emplace(s.id, SlotState{});
    }
    r.pair = std::move(pair);
  }
  return r;
}

void record_refinement(TemplatePair & pair, std::string_view slot, bool temporal)
{
  auto it = pair.slots.find(std::string{slot});
  if (it == pair.slots.end()) {
    throw Error(codes::kUnknownSlot, "unknown slot '" + std::string{slot} + "'");
  }
  bool & flag = temporal ? it->second.temporal : it->second.conditional;
  if (flag) {
    throw Error(
      codes::kDuplicateRefinement, "slot " + std::string{slot} + " already has a " +
                                     (temporal ? "temporal" : "conditional") + " refinement");
  }
  flag = true;
}

void insert_adjunct(ContractTemplate & t, std::string_view slot, std::string_view adjunct)
{
  auto it = std::find_if(t.slots.begin(), t.slots.end(), [&](const auto & s) { return s.id == slot; });
  if (it == t.slots.end()) {
    throw Error(codes::kUnknownSlot, "unknown slot '" + std::string{slot} + "'");
  }
  const std::size_t at = it->anchor;
  const std::string inserted = std::string{adjunct} + " ";
  std::string & clause = t.clauses.at(it->clause);
  // "... Buyer [P1]." -> "... Buyer before March 31, 2024 [P1]."
  clause.insert(at, inserted);
  for (auto & s : t.slots) {
    if (s.clause == it->clause && s.anchor >= at) {
      s.anchor += inserted.size();
    }
  }
}

std::string render_template(const ContractTemplate & t)
{
  std::string out;
  if (!t.preamble.empty()) {
    out += strip_markers(t.preamble, t.slots) + "\n\n";
  }
  for (std::size_t i = 0; i < t.clauses.size(); ++i) {
    out += std::to_string(i + 1) + ". " + strip_markers(t.clauses[i], t.slots) + "\n";
  }
  return out;
}

bool literal_matches(ParamKind kind, std::string_view literal)
{
  static const std::regex kNumber{R"(-?[0-9]+(\.[0-9]+)?)"};
  static const std::regex kMoney{R"(\$?([0-9]{1,3}(,[0-9]{3})+|[0-9]+)(\.[0-9]{1,2})?)"};
  static const std::regex kPercent{R"([0-9]+(\.[0-9]+)?%?)"};
  static const std::regex kLongDate{R"(([A-Z][a-z]+) ([0-9]{1,2}), ([0-9]{4}))"};

  const std::string s{literal};
  switch (kind) {
    case ParamKind::Number:
      return std::regex_match(s, kNumber);
    case ParamKind::Money:
      return std::regex_match(s, kMoney);
    case ParamKind::Percentage:
      return std::regex_match(s, kPercent);
    case ParamKind::Date: {
      if (parse_iso_date(s)) {
        return true;
      }
      std::smatch m;
      if (!std::regex_match(s, m, kLongDate)) {
        return false;
      }
      const auto month = month_from_name(m[1].str());
      if (!month) {
        return false;
      }
      const std::chrono::year_month_day ymd{
        std::chrono::year{std::stoi(m[3].str())}, std::chrono::month{*month},
        std::chrono::day{static_cast<unsigned>(std::stoi(m[2].str()))}};
      return ymd.ok();
    }
    case ParamKind::Party:
    case ParamKind::String:
      return s.find_first_not_of(" \t") != std::string::npos && s.find('\n') == std::string::npos;
  }
  return false;
}

std::string instantiate(const ContractTemplate & t, const std::map<std::string, std::string> & values)
{
  for (const auto & p : t.parameters) {
    auto it = values.find(p.name);
    if (it == values.end()) {
      throw Error(codes::kMissingValue, "no value for template parameter '" + p.name + "'");
    }
    if (!literal_matches(p.kind, it->second)) {
      throw Error(
        codes::kLiteralKindMismatch, "value '" + it->second + "' for '" + p.name + "' is not a " +
                                       std::string{to_string(p.kind)} + " literal");
    }
  }
  return substitute(render_template(t), values);
}

}  // namespace symboleo::tmpl
