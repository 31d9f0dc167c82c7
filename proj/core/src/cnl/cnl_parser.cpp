#include "symboleo/cnl/cnl.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>

#include <nlohmann/json.hpp>

#include "symboleo/common/error.hpp"

namespace symboleo::cnl
{

namespace
{

constexpr std::string_view kKeywords[] = {"before", "after", "between", "within", "if"};

enum class TokKind { Word, Int, Comma, Placeholder, Other };

struct Tok
{
  TokKind kind;
  std::string text;
  int col = 1;   // 1-based code-point column
  int width = 1;
};

int columns(std::string_view s)
{
  return static_cast<int>(std::count_if(
    s.begin(), s.end(), [](char c) { return (static_cast<unsigned char>(c) & 0xC0) != 0x80; }));
}

std::vector<Tok> lex(std::string_view s)
{
  std::vector<Tok> out;
  std::size_t i = 0;
  auto is_word = [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_' || c == '-';
  };
  while (i < s.size()) {
    const char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c)) != 0) {
      ++i;
      continue;
    }
    const int col = columns(s.substr(0, i)) + 1;
    std::size_t j = i + 1;
    TokKind kind = TokKind::Other;
    if (std::isdigit(static_cast<unsigned char>(c)) != 0) {
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j])) != 0) {
        ++j;
      }
      kind = TokKind::Int;
      if (j < s.size() && is_word(s[j])) {
        while (j < s.size() && is_word(s[j])) {
          ++j;
        }
        kind = TokKind::Other;
      }
    } else if (std::isalpha(static_cast<unsigned char>(c)) != 0) {
      while (j < s.size() && is_word(s[j])) {
        ++j;
      }
      kind = TokKind::Word;
    } else if (c == ',') {
      kind = TokKind::Comma;
    } else if (c == '[') {
      const auto close = s.find(']', i);
      std::size_t k = i + 1;
      while (k < s.size() && (std::isupper(static_cast<unsigned char>(s[k])) != 0 ||
                              std::isdigit(static_cast<unsigned char>(s[k])) != 0 || s[k] == '_')) {
        ++k;
      }
      if (close != std::string_view::npos && k == close && close > i + 1 &&
          std::isupper(static_cast<unsigned char>(s[i + 1])) != 0) {
        j = close + 1;
        kind = TokKind::Placeholder;
      }
    } else if ((static_cast<unsigned char>(c) & 0x80) != 0) {
      while (j < s.size() && (static_cast<unsigned char>(s[j]) & 0xC0) == 0x80) {
        ++j;
      }
    }
    const std::string text{s.substr(i, j - i)};
    out.push_back({kind, text, col, columns(text)});
    i = j;
  }
  return out;
}

struct CnlSyntaxError
{
  std::string code;
  std::string message;
  int col;
  int width;
};

class CnlParser
{
public:
  CnlParser(std::vector<Tok> toks, int text_cols) : toks_(std::move(toks)), end_col_(text_cols + 1) {}

  const std::vector<Tok> & tokens() const { return toks_; }
  // Index of the verb token of the last phrase parsed.
  std::size_t verb_token() const { return verb_tok_; }

  Form parse()
  {
    if (toks_.empty()) {
      fail("empty refinement; expected one of before, after, between, within, if");
    }
    const Tok & kw = toks_[0];
    pos_ = 1;
    Form f;
    if (kw.kind == TokKind::Word && kw.text == "before") {
      f = form::Before{date()};
    } else if (kw.kind == TokKind::Word && kw.text == "after") {
      f = form::After{date()};
    } else if (kw.kind == TokKind::Word && kw.text == "between") {
      const std::size_t start_at = pos_;
      CnlDate a = date();
      expect_word("and");
      CnlDate b = date();
      if (a.date && b.date && *a.date > *b.date) {
        fail_at(toks_[start_at], "start date " + format_long_date(*a.date) + " is after end date " +
                                   format_long_date(*b.date));
      }
      if (!a.placeholder.empty() && a.placeholder == b.placeholder) {
        fail_at(toks_[start_at], "start and end use the same placeholder [" + a.placeholder + "]");
      }
      f = form::Between{a, b};
    } else if (kw.kind == TokKind::Word && kw.text == "within") {
      form::WithinOf w;
      w.duration.magnitude = integer("a number of days, weeks or months");
      const Tok & u = next("a unit (days, weeks, months)");
      const auto unit = u.kind == TokKind::Word ? parse_unit(u.text) : std::nullopt;
      if (!unit) {
        fail_at(u, "expected a unit (days, weeks, months), found '" + u.text + "'");
      }
      w.duration.unit = *unit;
      expect_word("of");
      w.phrase = phrase();
      f = w;
    } else if (kw.kind == TokKind::Word && kw.text == "if") {
      f = form::If{phrase()};
    } else {
      std::string msg = "unknown refinement keyword '" + kw.text + "'";
      std::string_view best;
      std::size_t best_d = 3;
      for (auto k : kKeywords) {
        const auto d = edit_distance(kw.text, k);
        if (d < best_d) {
          best_d = d;
          best = k;
        }
      }
      if (!best.empty()) {
        msg += "; did you mean '" + std::string{best} + "'?";
      } else {
        msg += "; expected one of before, after, between, within, if";
      }
      fail_at(kw, msg);
    }
    if (pos_ < toks_.size()) {
      fail_at(toks_[pos_], "unexpected '" + toks_[pos_].text + "' after end of refinement");
    }
    return f;
  }

private:
  [[noreturn]] void fail(const std::string & msg) const
  {
    throw CnlSyntaxError{std::string{codes::kNotInCnl}, msg, end_col_, 0};
  }

  [[noreturn]] void fail_at(const Tok & t, const std::string & msg) const
  {
    throw CnlSyntaxError{std::string{codes::kNotInCnl}, msg, t.col, t.width};
  }

  const Tok & next(const std::string & what)
  {
    if (pos_ >= toks_.size()) {
      fail("expected " + what + " at end of text");
    }
    return toks_[pos_++];
  }

  void expect_word(std::string_view w)
  {
    const Tok & t = next("'" + std::string{w} + "'");
    if (t.kind != TokKind::Word || t.text != w) {
      fail_at(t, "expected '" + std::string{w} + "', found '" + t.text + "'");
    }
  }

  int integer(const std::string & what)
  {
    const Tok & t = next(what);
    int v = 0;
    if (t.kind != TokKind::Int) {
      fail_at(t, "expected " + what + ", found '" + t.text + "'");
    }
    const auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
    if (ec != std::errc{} || v <= 0 || v > 9999) {
      fail_at(t, "number '" + t.text + "' out of range (1..9999)");
    }
    return v;
  }

  CnlDate date()
  {
    const Tok & m = next("a date (e.g. March 31, 2024) or a [PLACEHOLDER]");
    if (m.kind == TokKind::Placeholder) {
      return CnlDate{std::nullopt, m.text.substr(1, m.text.size() - 2)};
    }
    const auto month = m.kind == TokKind::Word ? month_from_name(m.text) : std::nullopt;
    if (!month) {
      fail_at(m, "expected a date (e.g. March 31, 2024) or a [PLACEHOLDER], found '" + m.text + "'");
    }
    const Tok & d = toks_.size() > pos_ ? toks_[pos_] : m;
    const int day = integer("a day of the month");
    const Tok & comma = next("','");
    if (comma.kind != TokKind::Comma) {
      fail_at(comma, "expected ',' after the day, found '" + comma.text + "'");
    }
    const Tok & y = toks_.size() > pos_ ? toks_[pos_] : comma;
    const int year = integer("a four-digit year");
    if (y.text.size() != 4) {
      fail_at(y, "expected a four-digit year, found '" + y.text + "'");
    }
    const std::chrono::year_month_day ymd{
      std::chrono::year{year}, std::chrono::month{*month},
      std::chrono::day{static_cast<unsigned>(day)}};
    if (!ymd.ok()) {
      fail_at(d, m.text + " " + d.text + ", " + y.text + " is not a calendar date");
    }
    return CnlDate{Date{ymd}, {}};
  }

  EventPhrase phrase()
  {
    EventPhrase p;
    const Tok & s = next("an event phrase (Subject verb-ing [Object])");
    if (s.kind != TokKind::Word) {
      fail_at(s, "expected a subject, found '" + s.text + "'");
    }
    p.subject = s.text;
    const Tok & v = next("a verb ending in -ing");
    if (v.kind != TokKind::Word || v.text.size() <= 3 ||
        v.text.compare(v.text.size() - 3, 3, "ing") != 0) {
      fail_at(v, "expected a verb ending in -ing, found '" + v.text + "'");
    }
    p.verb = v.text;
    verb_tok_ = pos_ - 1;
    if (pos_ < toks_.size()) {
      const Tok & o = toks_[pos_];
      if (o.kind != TokKind::Word) {
        fail_at(o, "expected an object, found '" + o.text + "'");
      }
      p.object = o.text;
      ++pos_;
    }
    return p;
  }

  std::vector<Tok> toks_;
  int end_col_;
  std::size_t pos_ = 0;
  std::size_t verb_tok_ = 0;
};

bool iequals(std::string_view a, std::string_view b)
{
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) ==
                  std::tolower(static_cast<unsigned char>(y));
         });
}

bool is_vowel(char c)
{
  return std::string_view{"aeiou"}.find(c) != std::string_view::npos;
}

std::string pascal(std::string_view s)
{
  std::string out;
  bool up = true;
  for (char c : s) {
    if (c == '_' || c == '-') {
      up = true;
      continue;
    }
    out += up ? static_cast<char>(std::toupper(static_cast<unsigned char>(c))) : c;
    up = false;
  }
  return out;
}

std::string lower(std::string_view s)
{
  std::string out{s};
  for (auto & c : out) {
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

// Binding named `word` (any case) whose category is in `cats`, else the sole
// binding whose type is named `word`.
const Binding * find_party(
  const SymboleoSpec & spec, std::string_view word, std::initializer_list<Category> cats)
{
  auto in_cats = [&](const Binding & b) {
    auto c = spec.category_of(b.name);
    return c && std::find(cats.begin(), cats.end(), *c) != cats.end();
  };
  for (const auto & b : spec.bindings) {
    if (iequals(b.name, word) && in_cats(b)) {
      return &b;
    }
  }
  const Binding * found = nullptr;
  for (const auto & b : spec.bindings) {
    if (b.type == word && in_cats(b)) {
      if (found != nullptr) {
        return nullptr;
      }
      found = &b;
    }
  }
  return found;
}

std::vector<std::string> display_bindings(const SymboleoSpec & spec, Category cat, bool capitalize)
{
  std::vector<std::string> out;
  for (const auto & b : spec.bindings) {
    if (spec.category_of(b.name) == cat) {
      out.push_back(capitalize ? display_name(b.name) : b.name);
    }
  }
  return out;
}

}  // namespace

bool is_temporal(const Form & f)
{
  return !std::holds_alternative<form::If>(f);
}

std::size_t edit_distance(std::string_view a, std::string_view b)
{
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) {
    row[j] = j;
  }
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return row[b.size()];
}

std::string gerund(std::string_view verb)
{
  std::string v{verb};
  if (v.size() >= 2 && v.compare(v.size() - 2, 2, "ie") == 0) {
    return v.substr(0, v.size() - 2) + "ying";
  }
  // Silent e drops (issue -> issuing) except after e, o, y (see, hoe, dye).
  if (v.size() > 2 && v.back() == 'e' && std::string_view{"eoy"}.find(v[v.size() - 2]) == std::string_view::npos) {
    return v.substr(0, v.size() - 1) + "ing";
  }
  // Single-syllable consonant-vowel-consonant doubles: ship -> shipping.
  if (v.size() >= 3) {
    const char c3 = v[v.size() - 1];
    const char v2 = v[v.size() - 2];
    const char c1 = v[v.size() - 3];
    const auto groups = std::count_if(v.begin(), v.end(), is_vowel);
    if (!is_vowel(c3) && std::string_view{"wxy"}.find(c3) == std::string_view::npos && is_vowel(v2) &&
        !is_vowel(c1) && groups == 1) {
      return v + c3 + "ing";
    }
  }
  return v + "ing";
}

std::optional<std::string> verb_from_gerund(std::string_view word, const std::vector<std::string> & lexicon)
{
  if (word.size() <= 3 || word.substr(word.size() - 3) != "ing") {
    return std::nullopt;
  }
  const std::string stem{word.substr(0, word.size() - 3)};
  std::vector<std::string> candidates{stem, stem + "e"};
  if (stem.size() >= 2 && stem.back() == stem[stem.size() - 2]) {
    candidates.push_back(stem.substr(0, stem.size() - 1));
  }
  for (const auto & v : lexicon) {
    if (gerund(v) == word || std::find(candidates.begin(), candidates.end(), v) != candidates.end()) {
      return v;
    }
  }
  return std::nullopt;
}

std::string display_name(std::string_view binding)
{
  std::string out{binding};
  if (!out.empty()) {
    out[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(out[0])));
  }
  return out;
}

ResolvedEvent resolve_event_phrase(
  const EventPhrase & phrase, const SymboleoSpec & spec, const std::vector<std::string> & lexicon)
{
  const Binding * subject = find_party(spec, phrase.subject, {Category::Role});
  if (subject == nullptr) {
    throw Error(codes::kUnresolvablePhrase, "event phrase subject '" + phrase.subject + "' is not a party of the contract");
  }
  const auto verb = verb_from_gerund(phrase.verb, lexicon);
  if (!verb) {
    throw Error(codes::kUnresolvablePhrase, "event phrase verb '" + phrase.verb + "' is not in the lexicon");
  }
  const Binding * object = nullptr;
  if (!phrase.object.empty()) {
    object = find_party(spec, phrase.object, {Category::Role, Category::Asset});
    if (object == nullptr) {
      throw Error(
        codes::kUnresolvablePhrase, "event phrase object '" + phrase.object + "' is not a party or asset of the contract");
    }
  }
  const std::string object_name = object != nullptr ? object->name : std::string{};

  for (const auto & b : spec.bindings) {
    if (b.signature && spec.category_of(b.name) == Category::Event && b.signature->subject == subject->name &&
        b.signature->verb == *verb && b.signature->object == object_name) {
      return ResolvedEvent{b.name, false, {}, {}};
    }
  }

  // evt_inspect_buyer_energy : InspectBuyerEnergy as (buyer, inspect, energy)
  std::string type = pascal(*verb) + pascal(subject->name) + pascal(object_name);
  std::string name = "evt_" + lower(*verb) + "_" + lower(subject->name);
  if (!object_name.empty()) {
    name += "_" + lower(object_name);
  }
  const std::string base_type = type;
  const std::string base_name = name;
  for (int k = 2; spec.find_domain(type) != nullptr; ++k) {
    type = base_type + std::to_string(k);
  }
  auto taken = [&](const std::string & n) {
    return spec.find_binding(n) != nullptr || spec.find_window(n) != nullptr ||
           spec.find_parameter(n) != nullptr;
  };
  for (int k = 2; taken(name); ++k) {
    name = base_name + "_" + std::to_string(k);
  }

  ResolvedEvent r;
  r.binding = name;
  r.created = true;
  DomainDecl d;
  d.name = type;
  d.category = Category::Event;
  r.new_domain.push_back(d);
  Binding b;
  b.name = name;
  b.type = type;
  b.signature = EventSignature{subject->name, *verb, object_name, {}};
  r.new_bindings.push_back(b);
  return r;
}

void to_json(nlohmann::json & j, const ResolvedEvent & r)
{
  j = {{"event", r.binding}, {"wasCreated", r.created}};
  auto decls = nlohmann::json::array();
  for (const auto & d : r.new_domain) {
    decls.push_back(d.name + " isA " + std::string{to_string(d.category)} + ";");
  }
  for (const auto & b : r.new_bindings) {
    std::string line = b.name + " : " + b.type;
    if (b.signature) {
      line += " as (" + b.signature->subject + ", " + b.signature->verb;
      if (!b.signature->object.empty()) {
        line += ", " + b.signature->object;
      }
      line += ")";
    }
    decls.push_back(line + ";");
  }
  j["newDeclarations"] = decls;
}

std::string surface(const Form & f)
{
  auto date = [](const CnlDate & d) {
    return d.date ? format_long_date(*d.date) : "[" + d.placeholder + "]";
  };
  auto phrase = [](const EventPhrase & p) {
    return p.subject + " " + p.verb + (p.object.empty() ? "" : " " + p.object);
  };
  return std::visit(
    [&](const auto & v) -> std::string {
      using T = std::decay_t<decltype(v)>;
      if constexpr (std::is_same_v<T, form::Before>) {
        return "before " + date(v.date);
      } else if constexpr (std::is_same_v<T, form::After>) {
        return "after " + date(v.date);
      } else if constexpr (std::is_same_v<T, form::Between>) {
        return "between " + date(v.start) + " and " + date(v.end);
      } else if constexpr (std::is_same_v<T, form::WithinOf>) {
        return "within " + std::to_string(v.duration.magnitude) + " " +
               std::string{unit_name(v.duration.unit, v.duration.magnitude)} + " of " + phrase(v.phrase);
      } else {
        return "if " + phrase(v.phrase);
      }
    },
    f);
}

ParseCnlResult parse_cnl(std::string_view text, const tmpl::TemplatePair & pair, std::string_view slot)
{
  ParseCnlResult r;
  if (pair.tmpl.find_slot(slot) == nullptr) {
    r.diagnostics.push_back(
      {Severity::Error, std::string{codes::kUnknownSlot}, Span{},
       "unknown refinement slot '" + std::string{slot} + "'"});
    return r;
  }
  CnlParser parser{lex(text), columns(text)};
  Form f;
  try {
    f = parser.parse();
  } catch (const CnlSyntaxError & e) {
    r.diagnostics.push_back(
      {Severity::Error, e.code, Span{{1, e.col}, {1, e.col + e.width}}, "not valid CNL: " + e.message});
    return r;
  }

  const EventPhrase * phrase = nullptr;
  if (const auto * w = std::get_if<form::WithinOf>(&f)) {
    phrase = &w->phrase;
  } else if (const auto * c = std::get_if<form::If>(&f)) {
    phrase = &c->phrase;
  }
  if (phrase != nullptr) {
    try {
      resolve_event_phrase(*phrase, pair.spec, pair.tmpl.lexicon);
    } catch (const Error & e) {
      // Point at the phrase: from the subject to the end of the text.
      const auto & toks = parser.tokens();
      const Tok & subj = toks[parser.verb_token() - 1];
      r.diagnostics.push_back(
        {Severity::Error, e.code(), Span{{1, subj.col}, {1, columns(text) + 1}}, e.what()});
      return r;
    }
  }
  r.refinement = CnlRefinement{std::string{slot}, std::move(f)};
  return r;
}

OptionTree available_options(const tmpl::TemplatePair & pair, std::string_view slot)
{
  const tmpl::RefinementSlot * s = pair.tmpl.find_slot(slot);
  if (s == nullptr) {
    throw Error(codes::kUnknownSlot, "unknown refinement slot '" + std::string{slot} + "'");
  }
  OptionTree tree;
  tree.slot = s->id;
  tree.obligation = s->obligation;
  const Obligation * o = pair.spec.find_obligation(s->obligation);
  const auto state_it = pair.slots.find(s->id);
  const tmpl::SlotState state = state_it == pair.slots.end() ? tmpl::SlotState{} : state_it->second;

  std::vector<std::string> verbs;
  for (const auto & v : pair.tmpl.lexicon) {
    verbs.push_back(gerund(v));
  }
  auto objects = display_bindings(pair.spec, Category::Role, true);
  const auto assets = display_bindings(pair.spec, Category::Asset, false);
  objects.insert(objects.end(), assets.begin(), assets.end());
  const std::vector<OptionField> phrase_fields{
    {"subject", "choice", display_bindings(pair.spec, Category::Role, true), false},
    {"verb", "choice", verbs, false},
    {"object", "choice", objects, true},
  };

  const bool temporal_ok =
    !state.temporal && o != nullptr && std::holds_alternative<prop::Happens>(o->consequent.node());
  const bool conditional_ok = !state.conditional && o != nullptr &&
                              std::holds_alternative<prop::Literal>(o->trigger.node()) &&
                              std::get<prop::Literal>(o->trigger.node()).value;
  if (temporal_ok) {
    const OptionField date{"date", "date", {}, false};
    tree.choices.push_back({"before", "before [DATE]", {date}});
    tree.choices.push_back({"after", "after [DATE]", {date}});
    tree.choices.push_back(
      {"between", "between [DATE] and [DATE]", {{"start", "date", {}, false}, {"end", "date", {}, false}}});
    std::vector<OptionField> within{
      {"n", "integer", {}, false}, {"unit", "choice", {"days", "weeks", "months"}, false}};
    within.insert(within.end(), phrase_fields.begin(), phrase_fields.end());
    tree.choices.push_back({"within", "within [N] [UNIT] of [PHRASE]", within});
  }
  if (conditional_ok) {
    tree.choices.push_back({"if", "if [PHRASE]", phrase_fields});
  }
  return tree;
}

void to_json(nlohmann::json & j, const OptionTree & t)
{
  j = {{"slot", t.slot}, {"obligation", t.obligation}, {"options", nlohmann::json::array()}};
  for (const auto & c : t.choices) {
    nlohmann::json fields = nlohmann::json::array();
    for (const auto & f : c.fields) {
      nlohmann::json fj{{"name", f.name}, {"kind", f.kind}, {"optional", f.optional}};
      if (f.kind == "choice") {
        fj["choices"] = f.choices;
      }
      fields.push_back(fj);
    }
    j["options"].push_back({{"keyword", c.keyword}, {"pattern", c.pattern}, {"fields", fields}});
  }
}

}  // namespace symboleo::cnl
