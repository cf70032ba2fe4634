#pragma once

#include <array>
#include <string_view>
#include <vector>

#include "quiver/ast.hpp"
#include "quiver/error.hpp"

namespace quiver {

inline bool is_reserved_word(std::string_view word) {
  static constexpr std::array<std::string_view, 22> keywords = {
      "match", "create", "truncating", "trail", "acyclic", "simple", "shortest", "all",
      "any",   "where",  "return",     "as",    "order",   "by",     "asc",      "desc",
      "true",  "false",  "and",        "or",    "not",     "timestamp"};
  std::string lower = to_lower_ascii(word);
  for (auto k : keywords) {
    if (k == lower) return true;
  }
  return false;
}

// Tokenizes a statement. Comments run from `--` to end of line. Graph
// punctuation lexes as the compound tokens -[ ]-> <-[ ]- ; the parser splits
// a compound back apart when it closes an index bracket inside an expression.
inline std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  std::size_t i = 0;
  int line = 1, column = 1;

  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (text[i + k] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    i += n;
  };
  auto peek = [&](std::size_t off) -> char { return i + off < text.size() ? text[i + off] : '\0'; };
  auto push = [&](TokenKind kind, std::string tok_text, int tok_line, int tok_column) {
    out.push_back(Token{kind, std::move(tok_text), tok_line, tok_column});
  };

  auto is_ident_start = [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
  };
  auto is_ident_char = [&](char c) { return is_ident_start(c) || (c >= '0' && c <= '9'); };
  auto is_digit = [](char c) { return c >= '0' && c <= '9'; };

  // Reads a '...'-quoted run with '' escaping; returns the unescaped text.
  auto read_single_quoted = [&](int at_line, int at_column) {
    advance(1);
    std::string value;
    while (true) {
      if (i >= text.size()) {
        throw Error(ErrorCode::lex_error, "unterminated string", at_line, at_column);
      }
      char c = text[i];
      if (c == '\'') {
        if (peek(1) == '\'') {
          value += '\'';
          advance(2);
          continue;
        }
        advance(1);
        return value;
      }
      value += c;
      advance(1);
    }
  };

  while (i < text.size()) {
    char c = text[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance(1);
      continue;
    }
    if (c == '-' && peek(1) == '-') {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }

    int at_line = line, at_column = column;

    if (is_ident_start(c)) {
      std::size_t start = i;
      while (i < text.size() && is_ident_char(text[i])) advance(1);
      std::string word(text.substr(start, i - start));
      if (to_lower_ascii(word) == "timestamp") {
        // timestamp'...' lexes as one literal token.
        std::size_t save_i = i;
        int save_line = line, save_column = column;
        while (i < text.size() && (text[i] == ' ' || text[i] == '\t')) advance(1);
        if (i < text.size() && text[i] == '\'') {
          push(TokenKind::timestamp_literal, read_single_quoted(at_line, at_column), at_line, at_column);
          continue;
        }
        i = save_i;
        line = save_line;
        column = save_column;
      }
      TokenKind kind = is_reserved_word(word) ? TokenKind::keyword : TokenKind::identifier;
      push(kind, std::move(word), at_line, at_column);
      continue;
    }

    if (is_digit(c)) {
      std::size_t start = i;
      while (i < text.size() && is_digit(text[i])) advance(1);
      if (i < text.size() && text[i] == '.' && i + 1 < text.size() && is_digit(text[i + 1])) {
        advance(1);
        while (i < text.size() && is_digit(text[i])) advance(1);
      }
      push(TokenKind::number_literal, std::string(text.substr(start, i - start)), at_line, at_column);
      continue;
    }

    if (c == '\'') {
      push(TokenKind::string_literal, read_single_quoted(at_line, at_column), at_line, at_column);
      continue;
    }

    if (c == '"') {
      advance(1);
      std::string value;
      while (true) {
        if (i >= text.size()) {
          throw Error(ErrorCode::lex_error, "unterminated quoted identifier", at_line, at_column);
        }
        char q = text[i];
        if (q == '"') {
          if (peek(1) == '"') {
            value += '"';
            advance(2);
            continue;
          }
          advance(1);
          break;
        }
        value += q;
        advance(1);
      }
      push(TokenKind::quoted_identifier, std::move(value), at_line, at_column);
      continue;
    }

    // Compound punctuation, longest match first.
    auto starts_with = [&](std::string_view p) { return text.substr(i, p.size()) == p; };
    bool matched = false;
    for (std::string_view p : {"<-[", "]->", "-[", "<=", ">=", "<>"}) {
      if (starts_with(p)) {
        push(TokenKind::punctuation, std::string(p), at_line, at_column);
        advance(p.size());
        matched = true;
        break;
      }
    }
    if (matched) continue;
    if (c == ']' && peek(1) == '-') {
      push(TokenKind::punctuation, "]-", at_line, at_column);
      advance(2);
      continue;
    }

    static constexpr std::string_view singles = "()[]{},:;=<>+-*/.?";
    if (singles.find(c) != std::string_view::npos) {
      push(TokenKind::punctuation, std::string(1, c), at_line, at_column);
      advance(1);
      continue;
    }

    throw Error(ErrorCode::lex_error, std::string("illegal character '") + c + "'", at_line, at_column);
  }

  out.push_back(Token{TokenKind::end_of_input, "", line, column});
  return out;
}

}  // namespace quiver
