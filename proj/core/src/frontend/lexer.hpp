#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "dcv/frontend/diagnostic.hpp"

namespace dcv::frontend::detail {

enum class Tok {
  Ident,
  Int,
  Dot,
  LParen,
  RParen,
  LBracket,
  RBracket,
  Comma,
  Colon,
  Star,
  Turnstile,
  Assign,
  EqEq,
  NotEq,
  Lt,
  Le,
  Gt,
  Ge,
  Plus,
  Minus,
  Slash,
  Underscore,
  End,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  std::int64_t value = 0;
  SourceLoc loc;
};

std::string_view describe(Tok t);

/// Tokenizes the whole input. Lexical errors are appended to `diags`; the
/// offending character is skipped.
std::vector<Token> lex(std::string_view src, Diagnostics& diags);

} // namespace dcv::frontend::detail
