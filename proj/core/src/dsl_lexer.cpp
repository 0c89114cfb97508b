#include <cctype>
#include <set>

#include "dsl_internal.hpp"

namespace nsx::dsl::detail {

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

// UTF-8 synonyms and the ASCII text they stand for.
struct Synonym {
  const char* utf8;
  Tok kind;
  const char* text;
};

const Synonym kSynonyms[] = {
    {"\xE2\x88\xA7", Tok::Wedge, "/\\"},  // ∧
    {"\xE2\x86\x92", Tok::Arrow, "->"},   // →
    {"\xCF\x80", Tok::Ident, "pi"},       // π
    {"\xE2\x88\x97", Tok::Ident, "star"}, // ∗
    {"\xC3\x97", Tok::Ident, "x"},        // ×
};

}  // namespace

bool is_keyword(const std::string& word) {
  static const std::set<std::string> kw = {"scenario", "chart",   "opaque",  "metric",   "expr",  "form",
                                           "vfield",   "map",     "region",  "locus",    "check", "on",
                                           "off",      "in",      "at",      "expect",   "param", "over",
                                           "random",   "centered", "via",    "sign",     "count", "kmax",
                                           "regular",  "singular", "witness", "power",   "of",    "euclidean"};
  return kw.count(word) > 0;
}

std::vector<Token> lex(const std::string& s) {
  std::vector<Token> out;
  std::size_t i = 0;
  int line = 1;
  int col = 1;
  auto push = [&](Tok k, std::string text, int l, int c) { out.push_back(Token{k, std::move(text), l, c}); };
  auto advance = [&](std::size_t bytes) {
    // Columns count code points.
    for (std::size_t k = 0; k < bytes; ++k) {
      if ((static_cast<unsigned char>(s[i + k]) & 0xC0) != 0x80) ++col;
    }
    i += bytes;
  };

  while (i < s.size()) {
    const char c = s[i];
    const int l = line, cc = col;
    if (c == '\n') {
      push(Tok::Newline, "\\n", l, cc);
      ++i;
      ++line;
      col = 1;
      continue;
    }
    if (c == ' ' || c == '\t' || c == '\r') {
      advance(1);
      continue;
    }
    if (c == '#') {
      while (i < s.size() && s[i] != '\n') advance(1);
      continue;
    }
    bool matched = false;
    for (const auto& syn : kSynonyms) {
      const std::string u = syn.utf8;
      if (s.compare(i, u.size(), u) == 0) {
        advance(u.size());
        push(syn.kind, syn.text, l, cc);
        matched = true;
        break;
      }
    }
    if (matched) continue;
    // ι_X -> i_X
    if (s.compare(i, 2, "\xCE\xB9") == 0) {
      advance(2);
      std::string text = "i";
      while (i < s.size() && ident_char(s[i])) {
        text += s[i];
        advance(1);
      }
      push(Tok::Ident, text, l, cc);
      continue;
    }
    if (ident_start(c)) {
      std::string text;
      while (i < s.size() && ident_char(s[i])) {
        text += s[i];
        advance(1);
      }
      while (i < s.size() && s[i] == '\'') {
        text += '\'';
        advance(1);
      }
      push(Tok::Ident, text, l, cc);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::string text;
      while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
        text += s[i];
        advance(1);
      }
      push(Tok::Int, text, l, cc);
      continue;
    }
    if (c == '"') {
      std::string text;
      advance(1);
      bool closed = false;
      while (i < s.size() && s[i] != '\n') {
        if (s[i] == '\\' && i + 1 < s.size() && (s[i + 1] == '"' || s[i + 1] == '\\')) {
          text += s[i + 1];
          advance(2);
          continue;
        }
        if (s[i] == '"') {
          advance(1);
          closed = true;
          break;
        }
        text += s[i];
        advance(1);
      }
      if (!closed) {
        push(Tok::Bad, "\"" + text, l, cc);
        return out;
      }
      push(Tok::String, text, l, cc);
      continue;
    }
    if (c == '/' && i + 1 < s.size() && s[i + 1] == '\\') {
      advance(2);
      push(Tok::Wedge, "/\\", l, cc);
      continue;
    }
    if (c == '-' && i + 1 < s.size() && s[i + 1] == '>') {
      advance(2);
      push(Tok::Arrow, "->", l, cc);
      continue;
    }
    Tok k = Tok::Bad;
    switch (c) {
      case '(': k = Tok::LParen; break;
      case ')': k = Tok::RParen; break;
      case '[': k = Tok::LBracket; break;
      case ']': k = Tok::RBracket; break;
      case '{': k = Tok::LBrace; break;
      case '}': k = Tok::RBrace; break;
      case ',': k = Tok::Comma; break;
      case ':': k = Tok::Colon; break;
      case '=': k = Tok::Equals; break;
      case '+': k = Tok::Plus; break;
      case '-': k = Tok::Minus; break;
      case '*': k = Tok::Star; break;
      case '/': k = Tok::Slash; break;
      case '^': k = Tok::Caret; break;
      case '|': k = Tok::Bar; break;
      default: break;
    }
    if (k == Tok::Bad) {
      // Whole UTF-8 sequence for the error message.
      std::size_t len = 1;
      while (i + len < s.size() && (static_cast<unsigned char>(s[i + len]) & 0xC0) == 0x80) ++len;
      push(Tok::Bad, s.substr(i, len), l, cc);
      return out;
    }
    push(k, std::string(1, c), l, cc);
    advance(1);
  }
  push(Tok::End, "", line, col);
  return out;
}

std::string describe(const Token& t) {
  switch (t.kind) {
    case Tok::End: return "end of input";
    case Tok::Newline: return "end of line";
    case Tok::String: return "string \"" + t.text + "\"";
    default: return "'" + t.text + "'";
  }
}

}  // namespace nsx::dsl::detail
