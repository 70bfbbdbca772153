#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "cellgauge/expression.hpp"

namespace cellgauge {

enum class TokenKind {
  Number,
  String,
  Boolean,
  ErrorLiteral,
  Identifier,
  CellRef,
  OperatorSymbol,
  LeftParen,
  RightParen,
  Comma,
  Colon,
  Exclamation,
};

std::string_view toString(TokenKind kind);

struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;  // one past the last character
  bool operator==(const Span&) const = default;
};

struct Token {
  TokenKind kind;
  std::string lexeme;  // exact source slice
  Span span;

  // Content of a String token with the quotes removed and "" unescaped.
  std::string text() const;
};

// Lexes a formula body (no leading '='). Whitespace between tokens is
// dropped but recoverable from the spans. Throws LexError.
std::vector<Token> tokenize(std::string_view formula);

// Builds the expression tree. Throws ParseError.
Expression parse(const std::vector<Token>& tokens);

// tokenize + parse; accepts and strips a leading '='.
Expression parseFormula(std::string_view formula);

// Canonical text without the leading '='; parentheses appear only where the
// tree has Parenthesis nodes.
std::string serialize(const Expression& expr);

// Sheet prefix as it appears before '!', quoted when necessary.
std::string formatSheetPrefix(const std::optional<std::string>& workbook,
                              const std::string& sheet);

// Rewrites the relative parts of every reference in `formula` (which may
// start with '=') as if the formula were copied by (rowOffset, columnOffset).
// References pushed off the grid become #REF!. Text outside reference tokens
// is preserved byte for byte.
std::string translateFormula(std::string_view formula, int rowOffset,
                             int columnOffset);

}  // namespace cellgauge
