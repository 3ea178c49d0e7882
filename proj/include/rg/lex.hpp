#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "rg/diag.hpp"

namespace rg {

enum class Tok {
  Name,
  LBrace,
  RBrace,
  LParen,
  RParen,
  LBracket,
  RBracket,
  Comma,
  Colon,
  Semi,
  Assign,        // =
  EqEq,          // ==
  NotEq,         // != (single token, no internal whitespace)
  Arrow,         // ->
  Question,
  Bang,
  Dollar,
  DollarDollar,
  At,
  Star,
  Eof,
  Error,
};

struct Token {
  Tok kind = Tok::Eof;
  std::string_view text;
  Span span;
};

// Tokenizes the whole input. Unknown bytes become Error tokens; the lexer
// always terminates and always appends a final Eof token.
inline std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  size_t i = 0;
  uint32_t line = 1, col = 1;

  auto advance = [&](size_t n) {
    for (size_t k = 0; k < n; ++k) {
      if (src[i + k] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    i += n;
  };

  auto push = [&](Tok kind, size_t len) {
    out.push_back(Token{kind, src.substr(i, len),
                        Span{static_cast<uint32_t>(i), static_cast<uint32_t>(len), line, col}});
    advance(len);
  };

  while (i < src.size()) {
    char c = src[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance(1);
      continue;
    }
    if (c == '/' && i + 1 < src.size() && src[i + 1] == '/') {
      size_t j = i;
      while (j < src.size() && src[j] != '\n') ++j;
      advance(j - i);
      continue;
    }
    if (is_name_char(c)) {
      size_t j = i + 1;
      while (j < src.size() && is_name_char(src[j])) ++j;
      push(Tok::Name, j - i);
      continue;
    }
    switch (c) {
      case '{': push(Tok::LBrace, 1); break;
      case '}': push(Tok::RBrace, 1); break;
      case '(': push(Tok::LParen, 1); break;
      case ')': push(Tok::RParen, 1); break;
      case '[': push(Tok::LBracket, 1); break;
      case ']': push(Tok::RBracket, 1); break;
      case ',': push(Tok::Comma, 1); break;
      case ':': push(Tok::Colon, 1); break;
      case ';': push(Tok::Semi, 1); break;
      case '@': push(Tok::At, 1); break;
      case '*': push(Tok::Star, 1); break;
      case '?': push(Tok::Question, 1); break;
      case '=':
        if (i + 1 < src.size() && src[i + 1] == '=')
          push(Tok::EqEq, 2);
        else
          push(Tok::Assign, 1);
        break;
      case '!':
        if (i + 1 < src.size() && src[i + 1] == '=')
          push(Tok::NotEq, 2);
        else
          push(Tok::Bang, 1);
        break;
      case '$':
        if (i + 1 < src.size() && src[i + 1] == '$')
          push(Tok::DollarDollar, 2);
        else
          push(Tok::Dollar, 1);
        break;
      case '-':
        if (i + 1 < src.size() && src[i + 1] == '>')
          push(Tok::Arrow, 2);
        else
          push(Tok::Error, 1);
        break;
      default:
        push(Tok::Error, 1);
        break;
    }
  }
  out.push_back(Token{Tok::Eof, src.substr(src.size(), 0),
                      Span{static_cast<uint32_t>(src.size()), 0, line, col}});
  return out;
}

}  // namespace rg
