#include "symboleo/core/lexer.hpp"

#include <cctype>

namespace symboleo
{

namespace
{

bool is_ident_start(unsigned char c) { return std::isalpha(c) != 0 || c == '_'; }
bool is_ident_char(unsigned char c) { return std::isalnum(c) != 0 || c == '_'; }
bool is_digit(unsigned char c) { return c >= '0' && c <= '9'; }

class Lexer
{
public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run()
  {
    std::vector<Token> out;
    for (;;) {
      skip_trivia();
      if (pos_ >= src_.size()) {
        Token end;
        end.kind = TokenKind::End;
        end.span = {here(), here()};
        end.offset = pos_;
        out.push_back(std::move(end));
        return out;
      }
      out.push_back(next());
    }
  }

private:
  Position here() const { return {line_, col_}; }

  unsigned char peek(std::size_t ahead = 0) const
  {
    return pos_ + ahead < src_.size() ? static_cast<unsigned char>(src_[pos_ + ahead]) : 0;
  }

  void advance()
  {
    const auto c = static_cast<unsigned char>(src_[pos_++]);
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else if ((c & 0xC0) != 0x80) {
      // continuation bytes do not start a new column
      ++col_;
    }
  }

  void skip_trivia()
  {
    while (pos_ < src_.size()) {
      const auto c = peek();
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else if (c == '/' && peek(1) == '/') {
        while (pos_ < src_.size() && peek() != '\n') {
          advance();
        }
      } else {
        return;
      }
    }
  }

  bool looks_like_date() const
  {
    for (std::size_t i = 0; i < 10; ++i) {
      const auto c = peek(i);
      const bool dash = i == 4 || i == 7;
      if (dash ? c != '-' : !is_digit(c)) {
        return false;
      }
    }
    return !is_ident_char(peek(10));
  }

  Token next()
  {
    Token tok;
    tok.offset = pos_;
    const Position start = here();
    const auto c = peek();

    if (is_ident_start(c)) {
      while (pos_ < src_.size() && is_ident_char(peek())) {
        advance();
      }
      tok.kind = TokenKind::Ident;
      tok.text = std::string{src_.substr(tok.offset, pos_ - tok.offset)};
    } else if (is_digit(c)) {
      if (looks_like_date()) {
        for (int i = 0; i < 10; ++i) {
          advance();
        }
        tok.kind = TokenKind::Date;
      } else {
        while (is_digit(peek())) {
          advance();
        }
        if (peek() == '.' && is_digit(peek(1))) {
          advance();
          while (is_digit(peek())) {
            advance();
          }
        }
        tok.kind = TokenKind::Number;
      }
      tok.text = std::string{src_.substr(tok.offset, pos_ - tok.offset)};
    } else if (c == '"') {
      advance();
      std::string text;
      bool closed = false;
      while (pos_ < src_.size() && peek() != '\n') {
        const auto ch = peek();
        if (ch == '"') {
          advance();
          closed = true;
          break;
        }
        if (ch == '\\' && pos_ + 1 < src_.size()) {
          advance();
          const auto esc = peek();
          text.push_back(esc == 'n' ? '\n' : static_cast<char>(esc));
          advance();
          continue;
        }
        text.push_back(static_cast<char>(ch));
        advance();
      }
      tok.kind = closed ? TokenKind::String : TokenKind::Invalid;
      tok.text = closed ? std::move(text) : std::string{src_.substr(tok.offset, pos_ - tok.offset)};
    } else {
      static constexpr std::string_view kTwoChar[] = {":=", "<=", ">="};
      static constexpr std::string_view kOneChar = "(),;:.<>=-";
      tok.kind = TokenKind::Punct;
      bool matched = false;
      for (auto two : kTwoChar) {
        if (src_.substr(pos_, 2) == two) {
          advance();
          advance();
          tok.text = std::string{two};
          matched = true;
          break;
        }
      }
      if (!matched) {
        if (kOneChar.find(static_cast<char>(c)) == std::string_view::npos) {
          tok.kind = TokenKind::Invalid;
        }
        advance();
        // swallow the rest of a multi-byte sequence
        while (pos_ < src_.size() && (peek() & 0xC0) == 0x80) {
          advance();
        }
        tok.text = std::string{src_.substr(tok.offset, pos_ - tok.offset)};
      }
    }
    tok.length = pos_ - tok.offset;
    tok.span = {start, here()};
    return tok;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

}  // namespace

std::vector<Token> tokenize(std::string_view source) { return Lexer{source}.run(); }

}  // namespace symboleo
