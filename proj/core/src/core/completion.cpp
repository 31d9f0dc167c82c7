#include "symboleo/core/completion.hpp"

#include <algorithm>
#include <cctype>
#include <optional>
#include <set>

#include "symboleo/core/ast.hpp"
#include "symboleo/core/lexer.hpp"
#include "symboleo/core/parser.hpp"

namespace symboleo
{

namespace
{

constexpr std::string_view kSectionOrder[] = {
  "Parameters", "Domain", "Declarations", "Obligations", "Powers", "endContract"};

bool is_ident_byte(char c)
{
  return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_';
}

std::optional<std::size_t> byte_offset(std::string_view src, Position cursor)
{
  if (cursor.line < 1 || cursor.col < 1) {
    return std::nullopt;
  }
  int line = 1;
  int col = 1;
  for (std::size_t i = 0; i <= src.size(); ++i) {
    if (line == cursor.line && col == cursor.col) {
      return i;
    }
    if (i == src.size()) {
      break;
    }
    const auto c = static_cast<unsigned char>(src[i]);
    if (c == '\n') {
      if (line == cursor.line) {
        return std::nullopt;  // column past end of line
      }
      ++line;
      col = 1;
    } else if ((c & 0xC0) != 0x80) {
      // count a code point when its lead byte is consumed
      ++col;
    }
  }
  return std::nullopt;
}

struct Frame
{
  std::string callee;
  int arg = 0;
};

class Completer
{
public:
  Completer(const SymboleoSpec & spec, std::vector<Token> tokens)
  : spec_(spec), toks_(std::move(tokens))
  {
  }

  std::set<std::string> candidates()
  {
    std::string section;
    std::size_t stmt_begin = 0;
    for (std::size_t i = 0; i < toks_.size(); ++i) {
      const Token & t = toks_[i];
      if (t.kind == TokenKind::Ident && is_section(t.text)) {
        section = t.text;
        stmt_begin = i + 1;
      } else if (t.is_punct(";")) {
        stmt_begin = i + 1;
      }
    }
    stmt_.assign(toks_.begin() + static_cast<std::ptrdiff_t>(stmt_begin), toks_.end());

    if (stmt_.empty()) {
      return next_sections(section);
    }
    if (section == "Parameters") {
      return in_parameters();
    }
    if (section == "Domain") {
      return in_domain();
    }
    if (section == "Declarations") {
      return in_declarations();
    }
    if (section == "Obligations" || section == "Powers") {
      return in_norm(section == "Obligations" ? "Obligation" : "Power");
    }
    return {};
  }

private:
  static bool is_section(std::string_view s)
  {
    return std::find(std::begin(kSectionOrder), std::end(kSectionOrder), s) !=
           std::end(kSectionOrder);
  }

  std::set<std::string> next_sections(const std::string & current) const
  {
    std::set<std::string> out;
    bool after = current.empty();
    for (auto s : kSectionOrder) {
      if (after) {
        out.emplace(s);
      }
      if (s == current) {
        after = true;
      }
    }
    return out;
  }

  const Token & last() const { return stmt_.back(); }

  // ---- symbol groups ------------------------------------------------------

  std::set<std::string> types_of(std::optional<Category> cat) const
  {
    std::set<std::string> out;
    for (const auto & d : spec_.domain) {
      if (!cat || d.category == *cat) {
        out.insert(d.name);
      }
    }
    return out;
  }

  std::set<std::string> bindings_of(std::initializer_list<Category> cats) const
  {
    std::set<std::string> out;
    for (const auto & b : spec_.bindings) {
      auto c = spec_.category_of(b.name);
      if (c && std::find(cats.begin(), cats.end(), *c) != cats.end()) {
        out.insert(b.name);
      }
    }
    return out;
  }

  std::set<std::string> parameters(std::optional<ParamKind> kind) const
  {
    std::set<std::string> out;
    for (const auto & p : spec_.parameters) {
      if (!kind || p.kind == *kind) {
        out.insert(p.name);
      }
    }
    return out;
  }

  std::set<std::string> obligation_ids() const
  {
    std::set<std::string> out;
    for (const auto & o : spec_.obligations) {
      out.insert(o.id);
    }
    for (const Obligation * o : spec_.imposable_obligations()) {
      out.insert(o->id);
    }
    return out;
  }

  std::set<std::string> attributes_of_binding(const std::string & binding) const
  {
    std::set<std::string> out;
    if (const Binding * b = spec_.find_binding(binding)) {
      if (const DomainDecl * d = spec_.find_domain(b->type)) {
        for (const auto & a : d->attributes) {
          out.insert(a.name);
        }
      }
    }
    return out;
  }

  std::set<std::string> proposition_start() const
  {
    std::set<std::string> out{"Happens", "HappensBefore", "HappensAfter", "HappensWithin",
                              "Violated", "Fulfilled", "true", "false", "not"};
    auto events = bindings_of({Category::Event});
    out.insert(events.begin(), events.end());
    return out;
  }

  // ---- sections -----------------------------------------------------------

  std::set<std::string> in_parameters() const
  {
    if (stmt_.size() == 2 && last().is_punct(":")) {
      std::set<std::string> out{"Date", "Party", "Number", "Money", "Percentage", "String"};
      auto roles = types_of(Category::Role);
      out.insert(roles.begin(), roles.end());
      return out;
    }
    return {};
  }

  std::set<std::string> in_domain() const
  {
    if (stmt_.size() == 1) {
      return {"isA"};
    }
    if (last().is_ident("isA")) {
      return {"Role", "Asset", "Event"};
    }
    if (last().is_punct(":")) {
      return {"Number", "Date", "String"};
    }
    if (stmt_.size() == 3 && last().kind == TokenKind::Ident) {
      return {"with"};
    }
    return {};
  }

  std::set<std::string> in_declarations() const
  {
    if (stmt_.size() == 2 && last().is_punct(":")) {
      auto out = types_of(std::nullopt);
      out.insert("Window");
      return out;
    }
    const auto frames = frame_stack();
    if (!frames.empty() && (last().is_punct("(") || last().is_punct(","))) {
      const Frame & f = frames.back();
      if (f.callee == "as") {
        if (f.arg == 0) {
          return bindings_of({Category::Role});
        }
        if (f.arg == 2) {
          return bindings_of({Category::Role, Category::Asset});
        }
        return {};
      }
      if (f.callee == "Window" && f.arg == 0) {
        return bindings_of({Category::Event});
      }
      return {};
    }
    if (frames.empty() && (last().is_ident("with") || last().is_punct(","))) {
      std::set<std::string> out;
      if (stmt_.size() >= 3) {
        if (const DomainDecl * d = spec_.find_domain(stmt_[2].text)) {
          for (const auto & a : d->attributes) {
            out.insert(a.name);
          }
        }
      }
      return out;
    }
    if (last().is_punct(":=")) {
      return parameters(std::nullopt);
    }
    if (frames.empty() && stmt_.size() == 3 && last().kind == TokenKind::Ident) {
      return {"as", "with"};
    }
    return {};
  }

  std::vector<Frame> frame_stack() const
  {
    std::vector<Frame> frames;
    for (std::size_t i = 0; i < stmt_.size(); ++i) {
      const Token & t = stmt_[i];
      if (t.is_punct("(")) {
        std::string callee;
        if (i > 0 && stmt_[i - 1].kind == TokenKind::Ident) {
          const std::string & prev = stmt_[i - 1].text;
          if (prev != "and" && prev != "or" && prev != "not") {
            callee = prev;
          }
        }
        frames.push_back({callee, 0});
      } else if (t.is_punct(",") && !frames.empty()) {
        ++frames.back().arg;
      } else if (t.is_punct(")") && !frames.empty()) {
        frames.pop_back();
      }
    }
    return frames;
  }

  // Innermost frame that is a norm or action argument list.
  std::optional<Frame> enclosing_call(const std::vector<Frame> & frames) const
  {
    for (auto it = frames.rbegin(); it != frames.rend(); ++it) {
      if (!it->callee.empty()) {
        return *it;
      }
    }
    return std::nullopt;
  }

  std::set<std::string> in_norm(std::string_view keyword) const
  {
    if (stmt_.size() == 2 && last().is_punct(":")) {
      return {std::string{keyword}};
    }
    if (last().is_punct(".") && stmt_.size() >= 2) {
      return attributes_of_binding(stmt_[stmt_.size() - 2].text);
    }
    if (last().kind == TokenKind::Punct &&
        (last().text == "<" || last().text == "<=" || last().text == "=" || last().text == ">=" ||
         last().text == ">")) {
      return parameters(std::nullopt);
    }
    if (last().is_ident("and") || last().is_ident("or") || last().is_ident("not")) {
      return proposition_start();
    }
    const auto frames = frame_stack();
    if (frames.empty()) {
      return {};
    }
    const Frame & top = frames.back();
    const bool arg_start = last().is_punct("(") || last().is_punct(",");
    if (!arg_start) {
      // After a finished atom inside a proposition argument.
      if (last().is_punct(")") || last().kind == TokenKind::Ident ||
          last().kind == TokenKind::Number || last().kind == TokenKind::Date) {
        if (in_proposition_arg(frames)) {
          return {"and", "or"};
        }
      }
      return {};
    }
    if (top.callee.empty()) {
      return proposition_start();
    }
    if (top.callee == "Obligation" || top.callee == "Power") {
      if (top.arg < 2) {
        return bindings_of({Category::Role});
      }
      if (top.callee == "Power" && top.arg == 3) {
        return {"Impose", "Resume", "Suspend", "Terminate"};
      }
      return proposition_start();
    }
    if (top.callee == "Happens" || top.callee == "HappensBefore" ||
        top.callee == "HappensAfter" || top.callee == "HappensWithin") {
      if (top.arg == 0) {
        return bindings_of({Category::Event});
      }
      if (top.callee == "HappensWithin") {
        std::set<std::string> out{"Interval", "RelativeTo"};
        for (const auto & w : spec_.windows) {
          out.insert(w.name);
        }
        return out;
      }
      return parameters(ParamKind::Date);
    }
    if (top.callee == "Interval") {
      return parameters(ParamKind::Date);
    }
    if (top.callee == "RelativeTo") {
      return top.arg == 0 ? bindings_of({Category::Event}) : std::set<std::string>{};
    }
    if (top.callee == "Violated" || top.callee == "Fulfilled" || top.callee == "Suspend" ||
        top.callee == "Resume") {
      return obligation_ids();
    }
    return {};
  }

  bool in_proposition_arg(const std::vector<Frame> & frames) const
  {
    auto call = enclosing_call(frames);
    if (!call) {
      return false;
    }
    if (frames.back().callee.empty()) {
      return true;
    }
    if (call->callee == "Obligation") {
      return call->arg >= 2;
    }
    if (call->callee == "Power") {
      return call->arg == 2;
    }
    return false;
  }

  const SymboleoSpec & spec_;
  std::vector<Token> toks_;
  std::vector<Token> stmt_;
};

}  // namespace

std::vector<std::string> complete(std::string_view source, Position cursor)
{
  const auto offset = byte_offset(source, cursor);
  if (!offset) {
    return {};
  }
  std::size_t prefix_start = *offset;
  while (prefix_start > 0 && is_ident_byte(source[prefix_start - 1])) {
    --prefix_start;
  }
  const std::string prefix{source.substr(prefix_start, *offset - prefix_start)};

  std::vector<Token> before;
  for (Token & t : tokenize(source)) {
    if (t.kind == TokenKind::End || t.offset + t.length > prefix_start) {
      break;
    }
    before.push_back(std::move(t));
  }

  const ParseResult parsed = parse_recovering(source);
  const SymboleoSpec empty;
  const SymboleoSpec & spec = parsed.spec ? *parsed.spec : empty;

  std::vector<std::string> out;
  for (const auto & c : Completer{spec, std::move(before)}.candidates()) {
    if (c.compare(0, prefix.size(), prefix) == 0) {
      out.push_back(c);
    }
  }
  return out;
}

}  // namespace symboleo
