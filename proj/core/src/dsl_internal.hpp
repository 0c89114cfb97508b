#pragma once

#include <string>
#include <vector>

#include "nsx/dsl.hpp"

namespace nsx::dsl::detail {

enum class Tok {
  Ident,
  Int,
  String,
  LParen,
  RParen,
  LBracket,
  RBracket,
  LBrace,
  RBrace,
  Comma,
  Colon,
  Equals,
  Plus,
  Minus,
  Star,
  Slash,
  Wedge,
  Caret,
  Bar,
  Arrow,
  Newline,
  End,
  Bad,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  int line = 1;
  int column = 1;
};

/// Newlines are significant (statement separators). A Bad token carries
/// the offending text; the parser turns it into a ParseError.
std::vector<Token> lex(const std::string& source);

std::string describe(const Token& t);

bool is_keyword(const std::string& word);

}  // namespace nsx::dsl::detail
