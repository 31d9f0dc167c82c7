#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "symboleo/common/diagnostic.hpp"

namespace symboleo
{

enum class TokenKind { Ident, Number, String, Date, Punct, Invalid, End };

struct Token
{
  TokenKind kind = TokenKind::End;
  std::string text;  // identifier/punct text, string contents, raw number/date
  Span span;
  std::size_t offset = 0;  // byte offset of the first character
  std::size_t length = 0;  // byte length in the source

  bool is(TokenKind k, std::string_view t) const { return kind == k && text == t; }
  bool is_punct(std::string_view t) const { return is(TokenKind::Punct, t); }
  bool is_ident(std::string_view t) const { return is(TokenKind::Ident, t); }
};

// Total: any byte sequence tokenizes. Unknown characters become Invalid
// tokens; unterminated strings run to end of line. `//` comments are skipped.
// The result always ends with an End token.
std::vector<Token> tokenize(std::string_view source);

}  // namespace symboleo
