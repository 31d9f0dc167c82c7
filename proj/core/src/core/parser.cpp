#include "symboleo/core/parser.hpp"

#include <array>
#include <charconv>

#include "symboleo/core/lexer.hpp"

namespace symboleo
{

namespace
{

constexpr std::array<std::string_view, 6> kSections{
  "Parameters", "Domain", "Declarations", "Obligations", "Powers", "endContract"};

constexpr int kMaxNesting = 128;

struct SyntaxError
{
};

class Parser
{
public:
  explicit Parser(std::string_view source) : toks_(tokenize(source)) {}

  ParseResult run()
  {
    SymboleoSpec spec;
    header(spec);
    section("Parameters", [&] { parameter(spec); });
    section("Domain", [&] { domain_decl(spec); });
    section("Declarations", [&] { declaration(spec); });
    section("Obligations", [&] { spec.obligations.push_back(obligation_stmt()); });
    section("Powers", [&] { spec.powers.push_back(power_stmt()); });
    footer();
    ParseResult out;
    out.diagnostics = std::move(diags_);
    out.spec = std::move(spec);
    return out;
  }

private:
  // ---- token access -------------------------------------------------------

  const Token & cur() const { return toks_[i_]; }
  const Token & at(std::size_t ahead) const
  {
    return toks_[std::min(i_ + ahead, toks_.size() - 1)];
  }
  const Token & prev() const { return toks_[i_ == 0 ? 0 : i_ - 1]; }

  const Token & take()
  {
    const Token & t = toks_[i_];
    if (t.kind != TokenKind::End) {
      ++i_;
    }
    return t;
  }

  static std::string describe(const Token & t)
  {
    switch (t.kind) {
      case TokenKind::End:
        return "end of input";
      case TokenKind::String:
        return "string \"" + t.text + "\"";
      default:
        return "'" + t.text + "'";
    }
  }

  [[noreturn]] void fail(const Token & t, const std::string & message)
  {
    diags_.push_back({Severity::Error, std::string{codes::kSyntax}, t.span, message});
    throw SyntaxError{};
  }

  [[noreturn]] void fail_expected(std::string_view what)
  {
    fail(cur(), "expected " + std::string{what} + " but found " + describe(cur()));
  }

  void expect_punct(std::string_view p)
  {
    if (!cur().is_punct(p)) {
      fail_expected("'" + std::string{p} + "'");
    }
    take();
  }

  void expect_keyword(std::string_view kw)
  {
    if (!cur().is_ident(kw)) {
      fail_expected("'" + std::string{kw} + "'");
    }
    take();
  }

  const Token & expect_ident(std::string_view what = "an identifier")
  {
    if (cur().kind != TokenKind::Ident) {
      fail_expected(what);
    }
    return take();
  }

  bool accept_punct(std::string_view p)
  {
    if (cur().is_punct(p)) {
      take();
      return true;
    }
    return false;
  }

  static bool is_section_keyword(const Token & t)
  {
    if (t.kind != TokenKind::Ident) {
      return false;
    }
    for (auto s : kSections) {
      if (t.text == s) {
        return true;
      }
    }
    return false;
  }

  Span span_from(const Token & first) const { return {first.span.start, prev().span.end}; }

  // Skip the rest of a broken statement: through the next ';' or up to the
  // next section keyword.
  void recover()
  {
    while (cur().kind != TokenKind::End && !is_section_keyword(cur())) {
      if (take().is_punct(";")) {
        return;
      }
    }
  }

  // ---- structure ----------------------------------------------------------

  void header(SymboleoSpec & spec)
  {
    try {
      expect_keyword("Contract");
      spec.name = expect_ident("a contract name").text;
    } catch (const SyntaxError &) {
      while (cur().kind != TokenKind::End && !is_section_keyword(cur())) {
        take();
      }
    }
  }

  template <typename Statement>
  void section(std::string_view keyword, Statement statement)
  {
    if (cur().is_ident(keyword)) {
      take();
    } else {
      try {
        fail_expected("'" + std::string{keyword} + "'");
      } catch (const SyntaxError &) {
      }
      if (!is_section_keyword(cur())) {
        recover();
      }
      // A later section keyword means this one is simply missing.
      if (!cur().is_ident(keyword)) {
        return;
      }
      take();
    }
    while (cur().kind != TokenKind::End && !is_section_keyword(cur())) {
      const std::size_t before = i_;
      depth_ = 0;
      try {
        statement();
      } catch (const SyntaxError &) {
        recover();
      }
      if (i_ == before) {
        take();
      }
    }
  }

  void footer()
  {
    try {
      expect_keyword("endContract");
      if (cur().kind != TokenKind::End) {
        fail(cur(), "unexpected " + describe(cur()) + " after 'endContract'");
      }
    } catch (const SyntaxError &) {
    }
  }

  // ---- statements ---------------------------------------------------------

  void parameter(SymboleoSpec & spec)
  {
    const Token & first = cur();
    Parameter p;
    p.name = expect_ident("a parameter name").text;
    expect_punct(":");
    const Token & type = expect_ident("a parameter type");
    if (auto kind = param_kind_from(type.text)) {
      p.kind = *kind;
    } else {
      p.kind = ParamKind::Party;
      p.role_type = type.text;
    }
    expect_punct(";");
    p.loc.span = span_from(first);
    spec.parameters.push_back(std::move(p));
  }

  void domain_decl(SymboleoSpec & spec)
  {
    const Token & first = cur();
    DomainDecl d;
    d.name = expect_ident("a type name").text;
    expect_keyword("isA");
    const Token & cat = expect_ident("Role, Asset or Event");
    auto category = category_from(cat.text);
    if (!category) {
      fail(cat, "expected Role, Asset or Event but found " + describe(cat));
    }
    d.category = *category;
    if (cur().is_ident("with")) {
      take();
      do {
        const Token & attr_first = cur();
        Attribute a;
        a.name = expect_ident("an attribute name").text;
        expect_punct(":");
        const Token & kind = expect_ident("Number, Date or String");
        auto k = attr_kind_from(kind.text);
        if (!k) {
          fail(kind, "expected Number, Date or String but found " + describe(kind));
        }
        a.kind = *k;
        a.loc.span = span_from(attr_first);
        d.attributes.push_back(std::move(a));
      } while (accept_punct(","));
    }
    expect_punct(";");
    d.loc.span = span_from(first);
    spec.domain.push_back(std::move(d));
  }

  void declaration(SymboleoSpec & spec)
  {
    const Token & first = cur();
    const std::string name = expect_ident("a binding name").text;
    expect_punct(":");
    const Token & type = expect_ident("a type name");
    if (type.text == "Window" && cur().is_punct("(")) {
      WindowDecl w;
      w.name = name;
      take();
      const Token & anchor = expect_ident("an anchor event");
      w.anchor = anchor.text;
      w.anchor_loc.span = anchor.span;
      expect_punct(",");
      w.duration = duration();
      expect_punct(")");
      expect_punct(";");
      w.loc.span = span_from(first);
      spec.windows.push_back(std::move(w));
      return;
    }
    Binding b;
    b.name = name;
    b.type = type.text;
    b.type_loc.span = type.span;
    if (cur().is_ident("as")) {
      take();
      const Token & sig_first = cur();
      expect_punct("(");
      EventSignature sig;
      sig.subject = expect_ident("a subject").text;
      expect_punct(",");
      sig.verb = expect_ident("a verb").text;
      if (accept_punct(",")) {
        sig.object = expect_ident("an object").text;
      }
      expect_punct(")");
      sig.loc.span = span_from(sig_first);
      b.signature = std::move(sig);
    }
    if (cur().is_ident("with")) {
      take();
      do {
        const Token & a_first = cur();
        Assignment a;
        a.attribute = expect_ident("an attribute name").text;
        expect_punct(":=");
        a.value = value();
        a.loc.span = span_from(a_first);
        b.assignments.push_back(std::move(a));
      } while (accept_punct(","));
    }
    expect_punct(";");
    b.loc.span = span_from(first);
    spec.bindings.push_back(std::move(b));
  }

  Obligation obligation_body(const Token & first, std::string id)
  {
    Obligation o;
    o.id = std::move(id);
    expect_keyword("Obligation");
    expect_punct("(");
    const Token & debtor = expect_ident("a debtor");
    o.debtor = debtor.text;
    o.debtor_loc.span = debtor.span;
    expect_punct(",");
    const Token & creditor = expect_ident("a creditor");
    o.creditor = creditor.text;
    o.creditor_loc.span = creditor.span;
    expect_punct(",");
    o.trigger = proposition();
    expect_punct(",");
    o.consequent = proposition();
    expect_punct(")");
    o.loc.span = span_from(first);
    return o;
  }

  Obligation obligation_stmt()
  {
    const Token & first = cur();
    std::string id = expect_ident("an obligation id").text;
    expect_punct(":");
    Obligation o = obligation_body(first, std::move(id));
    expect_punct(";");
    o.loc.span = span_from(first);
    return o;
  }

  Power power_stmt()
  {
    const Token & first = cur();
    Power p;
    p.id = expect_ident("a power id").text;
    expect_punct(":");
    expect_keyword("Power");
    expect_punct("(");
    const Token & holder = expect_ident("a power holder");
    p.holder = holder.text;
    p.holder_loc.span = holder.span;
    expect_punct(",");
    const Token & counter = expect_ident("a counterparty");
    p.counterparty = counter.text;
    p.counterparty_loc.span = counter.span;
    expect_punct(",");
    p.trigger = proposition();
    expect_punct(",");
    p.action = power_action();
    expect_punct(")");
    expect_punct(";");
    p.loc.span = span_from(first);
    return p;
  }

  PowerAction power_action()
  {
    const Token & first = cur();
    const Token & kw = expect_ident("Suspend, Resume, Terminate or Impose");
    if (kw.text == "Terminate") {
      return action::Terminate{};
    }
    if (kw.text == "Suspend" || kw.text == "Resume") {
      const bool suspend = kw.text == "Suspend";
      expect_punct("(");
      std::vector<std::string> targets;
      do {
        targets.push_back(expect_ident("an obligation id").text);
      } while (accept_punct(","));
      expect_punct(")");
      Loc loc{span_from(first)};
      if (suspend) {
        return action::Suspend{std::move(targets), loc};
      }
      return action::Resume{std::move(targets), loc};
    }
    if (kw.text == "Impose") {
      expect_punct("(");
      const Token & id_tok = cur();
      std::string id = expect_ident("an obligation id").text;
      expect_punct(":");
      Obligation o = obligation_body(id_tok, std::move(id));
      expect_punct(")");
      return action::Impose{std::move(o)};
    }
    fail(kw, "expected Suspend, Resume, Terminate or Impose but found " + describe(kw));
  }

  // ---- values -------------------------------------------------------------

  Duration duration()
  {
    const Token & n = cur();
    if (n.kind != TokenKind::Number || n.text.find('.') != std::string::npos) {
      fail_expected("a whole number");
    }
    Duration d;
    const auto [ptr, ec] = std::from_chars(n.text.data(), n.text.data() + n.text.size(), d.magnitude);
    if (ec != std::errc{}) {
      fail(n, "number out of range: " + n.text);
    }
    take();
    const Token & unit = expect_ident("days, weeks or months");
    auto u = parse_unit(unit.text);
    if (!u) {
      fail(unit, "expected days, weeks or months but found " + describe(unit));
    }
    d.unit = *u;
    return d;
  }

  Date date_literal()
  {
    const Token & t = take();
    auto d = parse_iso_date(t.text);
    if (!d) {
      fail(t, "invalid calendar date " + t.text);
    }
    return *d;
  }

  Value value()
  {
    const Token & first = cur();
    Value v;
    if (first.kind == TokenKind::Number || first.is_punct("-")) {
      const bool negative = accept_punct("-");
      const Token & n = cur();
      if (n.kind != TokenKind::Number) {
        fail_expected("a number");
      }
      double x = 0;
      std::from_chars(n.text.data(), n.text.data() + n.text.size(), x);
      take();
      v = Value::of_number(negative ? -x : x);
    } else if (first.kind == TokenKind::String) {
      v = Value::of_string(take().text);
    } else if (first.kind == TokenKind::Date) {
      v = Value::of_date(date_literal());
    } else if (first.kind == TokenKind::Ident) {
      v = Value::of_param(take().text);
    } else {
      fail_expected("a value");
    }
    v.loc.span = span_from(first);
    return v;
  }

  Value time_point()
  {
    const Token & first = cur();
    Value v;
    if (first.kind == TokenKind::Date) {
      v = Value::of_date(date_literal());
    } else if (first.kind == TokenKind::Ident) {
      v = Value::of_param(take().text);
    } else {
      fail_expected("a date or a date parameter");
    }
    v.loc.span = span_from(first);
    return v;
  }

  Interval interval()
  {
    const Token & first = cur();
    if (first.is_ident("Interval") && at(1).is_punct("(")) {
      take();
      take();
      AbsoluteInterval a;
      a.start = time_point();
      expect_punct(",");
      a.end = time_point();
      expect_punct(")");
      return a;
    }
    if (first.is_ident("RelativeTo") && at(1).is_punct("(")) {
      take();
      take();
      RelativeInterval r;
      const Token & anchor = expect_ident("an anchor event");
      r.anchor = anchor.text;
      r.anchor_loc.span = anchor.span;
      expect_punct(",");
      r.duration = duration();
      expect_punct(")");
      return r;
    }
    const Token & name = expect_ident("an interval");
    return NamedInterval{name.text, Loc{name.span}};
  }

  // ---- propositions -------------------------------------------------------

  Prop proposition()
  {
    if (++depth_ > kMaxNesting) {
      fail(cur(), "proposition nested too deeply");
    }
    const Token & first = cur();
    Prop lhs = conjunction();
    while (cur().is_ident("or")) {
      take();
      Prop rhs = conjunction();
      lhs = Prop{prop::Or{std::move(lhs), std::move(rhs)}, span_from(first)};
    }
    --depth_;
    return lhs;
  }

  Prop conjunction()
  {
    const Token & first = cur();
    Prop lhs = unary();
    while (cur().is_ident("and")) {
      take();
      Prop rhs = unary();
      lhs = Prop{prop::And{std::move(lhs), std::move(rhs)}, span_from(first)};
    }
    return lhs;
  }

  Prop unary()
  {
    const Token & first = cur();
    if (first.is_ident("not")) {
      if (++depth_ > kMaxNesting) {
        fail(first, "proposition nested too deeply");
      }
      take();
      Prop operand = unary();
      --depth_;
      return Prop{prop::Not{std::move(operand)}, span_from(first)};
    }
    return atom();
  }

  std::pair<std::string, Loc> event_arg()
  {
    const Token & e = expect_ident("an event");
    return {e.text, Loc{e.span}};
  }

  Prop atom()
  {
    const Token & first = cur();
    if (first.is_punct("(")) {
      take();
      Prop inner = proposition();
      expect_punct(")");
      return inner;
    }
    if (first.kind != TokenKind::Ident) {
      fail_expected("a proposition");
    }
    const std::string & kw = first.text;
    if (kw == "true" || kw == "false") {
      take();
      return Prop{prop::Literal{kw == "true"}, span_from(first)};
    }
    const bool call = at(1).is_punct("(");
    if (call && (kw == "Happens" || kw == "HappensBefore" || kw == "HappensAfter" ||
                 kw == "HappensWithin")) {
      take();
      take();
      auto [event, loc] = event_arg();
      PropNode node = prop::Literal{};
      if (kw == "Happens") {
        node = prop::Happens{event, loc};
      } else if (kw == "HappensWithin") {
        expect_punct(",");
        node = prop::HappensWithin{event, interval(), loc};
      } else {
        expect_punct(",");
        Value t = time_point();
        if (kw == "HappensBefore") {
          node = prop::HappensBefore{event, std::move(t), loc};
        } else {
          node = prop::HappensAfter{event, std::move(t), loc};
        }
      }
      expect_punct(")");
      return Prop{std::move(node), span_from(first)};
    }
    if (call && (kw == "Violated" || kw == "Fulfilled")) {
      take();
      take();
      const Token & id = expect_ident("an obligation id");
      expect_punct(")");
      if (kw == "Violated") {
        return Prop{prop::Violated{id.text, Loc{id.span}}, span_from(first)};
      }
      return Prop{prop::Fulfilled{id.text, Loc{id.span}}, span_from(first)};
    }
    // event.attribute OP value
    take();
    expect_punct(".");
    const std::string attribute = expect_ident("an attribute").text;
    const Token & op_tok = cur();
    CmpOp op{};
    if (op_tok.is_punct("<")) {
      op = CmpOp::Lt;
    } else if (op_tok.is_punct("<=")) {
      op = CmpOp::Le;
    } else if (op_tok.is_punct("=")) {
      op = CmpOp::Eq;
    } else if (op_tok.is_punct(">=")) {
      op = CmpOp::Ge;
    } else if (op_tok.is_punct(">")) {
      op = CmpOp::Gt;
    } else {
      fail_expected("a comparison operator");
    }
    take();
    Value v = value();
    return Prop{
      prop::AttrCmp{kw, attribute, op, std::move(v), Loc{first.span}}, span_from(first)};
  }

  std::vector<Token> toks_;
  std::size_t i_ = 0;
  int depth_ = 0;
  std::vector<Diagnostic> diags_;
};

}  // namespace

ParseResult parse_recovering(std::string_view source)
{
  ParseResult r = Parser{source}.run();
  sort_diagnostics(r.diagnostics);
  return r;
}

ParseResult parse(std::string_view source)
{
  ParseResult r = parse_recovering(source);
  if (has_errors(r.diagnostics)) {
    r.spec.reset();
  }
  return r;
}

}  // namespace symboleo
