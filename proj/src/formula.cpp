#include "cellgauge/formula.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <optional>

#include "cellgauge/error.hpp"

namespace cellgauge {

namespace {

// Deeper trees are rejected so that recursive walks stay well inside the
// stack. Desktop spreadsheets cap nesting far below this.
constexpr int kMaxTreeDepth = 512;

constexpr std::array<std::string_view, 7> kErrorLiterals = {
    "#DIV/0!", "#NAME?", "#VALUE!", "#NULL!", "#REF!", "#NUM!", "#N/A"};

bool isAlpha(char c) { return std::isalpha(static_cast<unsigned char>(c)); }
bool isDigit(char c) { return std::isdigit(static_cast<unsigned char>(c)); }
bool isSpace(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r';
}
bool isWordStart(char c) {
  return isAlpha(c) || c == '_' || c == '\\' || c == '$';
}
bool isWordChar(char c) {
  return isAlpha(c) || isDigit(c) || c == '_' || c == '\\' || c == '.' ||
         c == '?' || c == '$';
}

std::string upper(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

// Decomposition of a word that looks like a (possibly partial) A1 reference.
struct RefParts {
  std::optional<int> column;
  std::optional<int> row;
  bool columnAbsolute = false;
  bool rowAbsolute = false;
};

// Accepts "$A$1", "A1", "$A" and "$1" forms. Plain "A" and plain "1" are not
// references on their own; the parser handles those next to a colon.
std::optional<RefParts> splitRefWord(std::string_view w, bool allowPartial) {
  RefParts parts;
  std::size_t i = 0;
  if (i < w.size() && w[i] == '$') {
    parts.columnAbsolute = true;
    ++i;
  }
  std::size_t letters = i;
  while (i < w.size() && isAlpha(w[i])) ++i;
  std::size_t nLetters = i - letters;
  if (nLetters > 3) return std::nullopt;
  if (nLetters > 0) {
    int col = columnLetterToIndex(w.substr(letters, nLetters));
    if (col > kMaxColumns) return std::nullopt;
    parts.column = col;
  } else if (parts.columnAbsolute) {
    // "$1": the '$' belongs to the row
    parts.columnAbsolute = false;
    parts.rowAbsolute = true;
  }
  if (i < w.size() && w[i] == '$') {
    if (parts.rowAbsolute || nLetters == 0) return std::nullopt;
    parts.rowAbsolute = true;
    ++i;
  }
  std::size_t digits = i;
  long long row = 0;
  while (i < w.size() && isDigit(w[i])) {
    row = row * 10 + (w[i] - '0');
    if (row > kMaxRows) return std::nullopt;
    ++i;
  }
  if (i != w.size()) return std::nullopt;
  if (i > digits) {
    if (row < 1) return std::nullopt;
    parts.row = static_cast<int>(row);
  } else if (parts.rowAbsolute) {
    return std::nullopt;
  }
  bool full = parts.row && parts.column;
  if (full) return parts;
  if (!allowPartial) return std::nullopt;
  // Partial references are only tokens when they carry a '$'.
  if (parts.column && !parts.row && parts.columnAbsolute) return parts;
  if (parts.row && !parts.column && parts.rowAbsolute) return parts;
  return std::nullopt;
}

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      while (pos_ < src_.size() && isSpace(src_[pos_])) ++pos_;
      if (pos_ >= src_.size()) break;
      out.push_back(next());
    }
    return out;
  }

 private:
  Token make(TokenKind kind, std::size_t begin) const {
    return Token{kind, std::string(src_.substr(begin, pos_ - begin)),
                 Span{begin, pos_}};
  }

  char peekNonSpace() const {
    std::size_t p = pos_;
    while (p < src_.size() && isSpace(src_[p])) ++p;
    return p < src_.size() ? src_[p] : '\0';
  }

  Token next() {
    std::size_t begin = pos_;
    char c = src_[pos_];
    switch (c) {
      case '(':
        ++pos_;
        return make(TokenKind::LeftParen, begin);
      case ')':
        ++pos_;
        return make(TokenKind::RightParen, begin);
      case ',':
        ++pos_;
        return make(TokenKind::Comma, begin);
      case ':':
        ++pos_;
        return make(TokenKind::Colon, begin);
      case '!':
        ++pos_;
        return make(TokenKind::Exclamation, begin);
      case '+':
      case '-':
      case '*':
      case '/':
      case '^':
      case '&':
      case '=':
      case '%':
        ++pos_;
        return make(TokenKind::OperatorSymbol, begin);
      case '<':
        ++pos_;
        if (pos_ < src_.size() && (src_[pos_] == '=' || src_[pos_] == '>'))
          ++pos_;
        return make(TokenKind::OperatorSymbol, begin);
      case '>':
        ++pos_;
        if (pos_ < src_.size() && src_[pos_] == '=') ++pos_;
        return make(TokenKind::OperatorSymbol, begin);
      case '"':
        return string(begin);
      case '\'':
        return quotedSheet(begin);
      case '#':
        return errorLiteral(begin);
      case '[':
        return word(begin);
      default:
        break;
    }
    if (isDigit(c) || (c == '.' && pos_ + 1 < src_.size() && isDigit(src_[pos_ + 1])))
      return number(begin);
    if (isWordStart(c)) return word(begin);
    throw LexError(begin, "illegal character");
  }

  Token string(std::size_t begin) {
    ++pos_;
    while (true) {
      if (pos_ >= src_.size()) throw LexError(begin, "unterminated string");
      if (src_[pos_] == '"') {
        if (pos_ + 1 < src_.size() && src_[pos_ + 1] == '"') {
          pos_ += 2;
          continue;
        }
        ++pos_;
        return make(TokenKind::String, begin);
      }
      ++pos_;
    }
  }

  // 'Sheet Name': lexed as an identifier; only meaningful before '!'.
  Token quotedSheet(std::size_t begin) {
    ++pos_;
    while (true) {
      if (pos_ >= src_.size())
        throw LexError(begin, "unterminated quoted sheet name");
      if (src_[pos_] == '\'') {
        if (pos_ + 1 < src_.size() && src_[pos_ + 1] == '\'') {
          pos_ += 2;
          continue;
        }
        ++pos_;
        break;
      }
      ++pos_;
    }
    if (pos_ - begin == 2) throw LexError(begin, "empty quoted sheet name");
    return make(TokenKind::Identifier, begin);
  }

  Token errorLiteral(std::size_t begin) {
    std::string_view rest = src_.substr(pos_);
    for (auto lit : kErrorLiterals) {
      if (rest.size() >= lit.size() &&
          std::equal(lit.begin(), lit.end(), rest.begin(), [](char a, char b) {
            return a == std::toupper(static_cast<unsigned char>(b));
          })) {
        pos_ += lit.size();
        return make(TokenKind::ErrorLiteral, begin);
      }
    }
    throw LexError(begin, "unknown error literal");
  }

  Token number(std::size_t begin) {
    while (pos_ < src_.size() && isDigit(src_[pos_])) ++pos_;
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      while (pos_ < src_.size() && isDigit(src_[pos_])) ++pos_;
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t save = pos_;
      ++pos_;
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
      if (pos_ < src_.size() && isDigit(src_[pos_])) {
        while (pos_ < src_.size() && isDigit(src_[pos_])) ++pos_;
      } else {
        pos_ = save;
      }
    }
    if (pos_ < src_.size() && (isAlpha(src_[pos_]) || src_[pos_] == '_'))
      throw LexError(pos_, "malformed number");
    return make(TokenKind::Number, begin);
  }

  Token word(std::size_t begin) {
    if (src_[pos_] == '[') {
      // external workbook prefix: [Book.xlsx]Sheet
      while (pos_ < src_.size() && src_[pos_] != ']') ++pos_;
      if (pos_ >= src_.size())
        throw LexError(begin, "unterminated workbook prefix");
      ++pos_;
      std::size_t nameStart = pos_;
      while (pos_ < src_.size() && isWordChar(src_[pos_])) ++pos_;
      if (pos_ == nameStart) throw LexError(pos_, "missing sheet name");
      return make(TokenKind::Identifier, begin);
    }
    while (pos_ < src_.size() && isWordChar(src_[pos_])) ++pos_;
    std::string_view w = src_.substr(begin, pos_ - begin);
    if (splitRefWord(w, true)) {
      // LOG10( is a call, not a cell
      if (peekNonSpace() != '(' || w.find('$') != std::string_view::npos)
        return make(TokenKind::CellRef, begin);
    }
    if (w.find('$') != std::string_view::npos)
      throw LexError(begin, "malformed reference");
    std::string up = upper(w);
    if ((up == "TRUE" || up == "FALSE") && peekNonSpace() != '(')
      return make(TokenKind::Boolean, begin);
    return make(TokenKind::Identifier, begin);
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

struct SheetPrefix {
  std::optional<std::string> workbook;
  std::string sheet;
};

SheetPrefix decodeSheetPrefix(std::string_view lexeme) {
  std::string raw;
  if (!lexeme.empty() && lexeme.front() == '\'') {
    std::string_view inner = lexeme.substr(1, lexeme.size() - 2);
    for (std::size_t i = 0; i < inner.size(); ++i) {
      raw.push_back(inner[i]);
      if (inner[i] == '\'' && i + 1 < inner.size() && inner[i + 1] == '\'') ++i;
    }
  } else {
    raw = std::string(lexeme);
  }
  SheetPrefix out;
  if (!raw.empty() && raw.front() == '[') {
    auto close = raw.find(']');
    if (close != std::string::npos) {
      out.workbook = raw.substr(1, close - 1);
      out.sheet = raw.substr(close + 1);
      return out;
    }
  }
  out.sheet = raw;
  return out;
}

std::optional<int> asColumnWord(std::string_view w) {
  if (w.empty() || w.size() > 3) return std::nullopt;
  for (char c : w)
    if (!isAlpha(c)) return std::nullopt;
  int col = columnLetterToIndex(w);
  if (col > kMaxColumns) return std::nullopt;
  return col;
}

std::optional<int> asRowNumber(std::string_view w) {
  if (w.empty() || w.size() > 7) return std::nullopt;
  int v = 0;
  for (char c : w) {
    if (!isDigit(c)) return std::nullopt;
    v = v * 10 + (c - '0');
  }
  if (v < 1 || v > kMaxRows) return std::nullopt;
  return v;
}

struct Parsed {
  Expression expr;
  int depth;
};

class Parser {
 public:
  explicit Parser(const std::vector<Token>& tokens) : toks_(tokens) {}

  Expression run() {
    if (toks_.empty()) fail({"expression"}, "empty formula");
    Parsed p = comparison();
    if (pos_ < toks_.size()) fail({"operator", "end of formula"}, "unexpected token");
    return std::move(p.expr);
  }

 private:
  [[noreturn]] void fail(std::vector<std::string> expected,
                         const std::string& what) const {
    std::size_t at = pos_ < toks_.size()
                         ? toks_[pos_].span.begin
                         : (toks_.empty() ? 0 : toks_.back().span.end);
    throw ParseError(at, std::move(expected), what);
  }

  const Token* peek(std::size_t ahead = 0) const {
    return pos_ + ahead < toks_.size() ? &toks_[pos_ + ahead] : nullptr;
  }

  bool peekOp(std::string_view sym) const {
    const Token* t = peek();
    return t && t->kind == TokenKind::OperatorSymbol && t->lexeme == sym;
  }

  bool peekKind(TokenKind kind, std::size_t ahead = 0) const {
    const Token* t = peek(ahead);
    return t && t->kind == kind;
  }

  Parsed node(Expression e, int depth) {
    if (depth > kMaxTreeDepth) fail({}, "formula nests too deeply");
    return Parsed{std::move(e), depth};
  }

  Parsed binary(OperatorKind kind, Parsed lhs, Parsed rhs) {
    int depth = 1 + std::max(lhs.depth, rhs.depth);
    std::vector<Expression> ops;
    ops.reserve(2);
    ops.push_back(std::move(lhs.expr));
    ops.push_back(std::move(rhs.expr));
    return node(Operator{kind, std::move(ops)}, depth);
  }

  Parsed unary(OperatorKind kind, Parsed operand) {
    int depth = 1 + operand.depth;
    std::vector<Expression> ops;
    ops.push_back(std::move(operand.expr));
    return node(Operator{kind, std::move(ops)}, depth);
  }

  std::optional<OperatorKind> comparisonOp() const {
    const Token* t = peek();
    if (!t || t->kind != TokenKind::OperatorSymbol) return std::nullopt;
    if (t->lexeme == "=") return OperatorKind::Eq;
    if (t->lexeme == "<>") return OperatorKind::Neq;
    if (t->lexeme == "<") return OperatorKind::Lt;
    if (t->lexeme == ">") return OperatorKind::Gt;
    if (t->lexeme == "<=") return OperatorKind::Le;
    if (t->lexeme == ">=") return OperatorKind::Ge;
    return std::nullopt;
  }

  Parsed comparison() {
    Parsed lhs = concat();
    while (auto op = comparisonOp()) {
      ++pos_;
      lhs = binary(*op, std::move(lhs), concat());
    }
    return lhs;
  }

  Parsed concat() {
    Parsed lhs = additive();
    while (peekOp("&")) {
      ++pos_;
      lhs = binary(OperatorKind::Concat, std::move(lhs), additive());
    }
    return lhs;
  }

  Parsed additive() {
    Parsed lhs = multiplicative();
    while (peekOp("+") || peekOp("-")) {
      auto kind = peek()->lexeme == "+" ? OperatorKind::Add : OperatorKind::Sub;
      ++pos_;
      lhs = binary(kind, std::move(lhs), multiplicative());
    }
    return lhs;
  }

  Parsed multiplicative() {
    Parsed lhs = power();
    while (peekOp("*") || peekOp("/")) {
      auto kind = peek()->lexeme == "*" ? OperatorKind::Mul : OperatorKind::Div;
      ++pos_;
      lhs = binary(kind, std::move(lhs), power());
    }
    return lhs;
  }

  Parsed power() {
    Parsed lhs = postfix();
    while (peekOp("^")) {
      ++pos_;
      lhs = binary(OperatorKind::Pow, std::move(lhs), postfix());
    }
    return lhs;
  }

  Parsed postfix() {
    Parsed operand = prefix();
    while (peekOp("%")) {
      ++pos_;
      operand = unary(OperatorKind::Percent, std::move(operand));
    }
    return operand;
  }

  Parsed prefix() {
    if (peekOp("-") || peekOp("+")) {
      auto kind = peek()->lexeme == "-" ? OperatorKind::UnaryMinus
                                        : OperatorKind::UnaryPlus;
      ++pos_;
      if (++nesting_ > kMaxTreeDepth) fail({}, "formula nests too deeply");
      Parsed operand = prefix();
      --nesting_;
      return unary(kind, std::move(operand));
    }
    return primary();
  }

  Parsed primary() {
    const Token* t = peek();
    if (!t) fail({"operand"}, "dangling operator");
    switch (t->kind) {
      case TokenKind::Number:
        if (peekKind(TokenKind::Colon, 1)) return reference(std::nullopt);
        ++pos_;
        return node(Constant{ValueType::Number, t->lexeme}, 1);
      case TokenKind::String:
        ++pos_;
        return node(Constant{ValueType::Text, t->lexeme}, 1);
      case TokenKind::Boolean:
        ++pos_;
        return node(Constant{ValueType::Boolean, upper(t->lexeme)}, 1);
      case TokenKind::ErrorLiteral:
        ++pos_;
        return node(Constant{ValueType::Error, upper(t->lexeme)}, 1);
      case TokenKind::LeftParen: {
        ++pos_;
        if (++nesting_ > kMaxTreeDepth) fail({}, "formula nests too deeply");
        Parsed inner = comparison();
        --nesting_;
        if (!peekKind(TokenKind::RightParen)) fail({")"}, "unbalanced parenthesis");
        ++pos_;
        int depth = inner.depth + 1;
        return node(Parenthesis{std::move(inner.expr)}, depth);
      }
      case TokenKind::Identifier:
        if (peekKind(TokenKind::LeftParen, 1)) return function();
        if (peekKind(TokenKind::Exclamation, 1)) return prefixed();
        return reference(std::nullopt);
      case TokenKind::CellRef:
        if (peekKind(TokenKind::Exclamation, 1)) return prefixed();
        return reference(std::nullopt);
      case TokenKind::RightParen:
      case TokenKind::Comma:
        fail({"operand"}, "missing operand");
      default:
        fail({"operand"}, "unexpected token");
    }
  }

  Parsed function() {
    const Token& nameTok = *peek();
    if (nameTok.lexeme.front() == '\'' || nameTok.lexeme.front() == '[')
      fail({"function name"}, "invalid function name");
    pos_ += 2;  // name and '('
    Function fn{upper(nameTok.lexeme), {}};
    int depth = 1;
    if (++nesting_ > kMaxTreeDepth) fail({}, "formula nests too deeply");
    if (peekKind(TokenKind::RightParen)) {
      ++pos_;
    } else {
      while (true) {
        if (peekKind(TokenKind::Comma) || peekKind(TokenKind::RightParen))
          fail({"argument"}, "empty argument");
        Parsed arg = comparison();
        depth = std::max(depth, arg.depth + 1);
        fn.args.push_back(std::move(arg.expr));
        if (peekKind(TokenKind::Comma)) {
          ++pos_;
          continue;
        }
        if (peekKind(TokenKind::RightParen)) {
          ++pos_;
          break;
        }
        fail({",", ")"}, "unbalanced parenthesis");
      }
    }
    --nesting_;
    return node(std::move(fn), depth);
  }

  // Sheet!... or 'Sheet'!... or [Book]Sheet!...
  Parsed prefixed() {
    SheetPrefix prefix = decodeSheetPrefix(peek()->lexeme);
    if (prefix.sheet.empty()) fail({"sheet name"}, "empty sheet name");
    pos_ += 2;
    if (peekKind(TokenKind::ErrorLiteral) && upper(peek()->lexeme) == "#REF!") {
      ++pos_;
      return node(Reference{prefix.sheet, prefix.workbook, BrokenTarget{}}, 1);
    }
    return reference(prefix);
  }

  // One side of a reference: full cell, or a column/row bound that is only
  // legal inside a range.
  std::optional<RangeBound> bound(const Token& t) const {
    if (t.kind == TokenKind::CellRef) {
      auto parts = splitRefWord(t.lexeme, true);
      if (!parts) return std::nullopt;
      return RangeBound{parts->row, parts->column, parts->rowAbsolute,
                        parts->columnAbsolute};
    }
    if (t.kind == TokenKind::Identifier) {
      if (auto col = asColumnWord(t.lexeme)) return RangeBound{std::nullopt, col};
    }
    if (t.kind == TokenKind::Number) {
      if (auto row = asRowNumber(t.lexeme)) return RangeBound{row, std::nullopt};
    }
    return std::nullopt;
  }

  Parsed reference(std::optional<SheetPrefix> prefix) {
    const Token* t = peek();
    if (!t) fail({"reference"}, "missing reference");
    std::optional<std::string> sheet;
    std::optional<std::string> workbook;
    if (prefix) {
      sheet = prefix->sheet;
      workbook = prefix->workbook;
    }

    if (peekKind(TokenKind::Colon, 1)) {
      auto start = bound(*t);
      if (!start) fail({"range start"}, "invalid range start");
      pos_ += 2;
      const Token* endTok = peek();
      if (!endTok) fail({"range end"}, "dangling range operator");
      // tolerate a repeated sheet prefix on the end: Sheet1!A1:Sheet1!B2
      if (peekKind(TokenKind::Exclamation, 1) &&
          (endTok->kind == TokenKind::Identifier ||
           endTok->kind == TokenKind::CellRef)) {
        SheetPrefix endPrefix = decodeSheetPrefix(endTok->lexeme);
        if (!prefix || upper(endPrefix.sheet) != upper(prefix->sheet) ||
            endPrefix.workbook != prefix->workbook)
          fail({"range end"}, "range spans sheets");
        pos_ += 2;
        endTok = peek();
        if (!endTok) fail({"range end"}, "dangling range operator");
      }
      auto end = bound(*endTok);
      if (!end) fail({"range end"}, "invalid range end");
      bool sameShape = (start->isCell() && end->isCell()) ||
                       (!start->row && !end->row && start->column && end->column) ||
                       (!start->column && !end->column && start->row && end->row);
      if (!sameShape) fail({"range end"}, "mismatched range bounds");
      ++pos_;
      return node(Range{sheet, workbook, *start, *end}, 1);
    }

    if (t->kind == TokenKind::CellRef) {
      auto parts = splitRefWord(t->lexeme, false);
      if (!parts) fail({"cell reference"}, "incomplete cell reference");
      ++pos_;
      return node(Reference{sheet, workbook,
                            CellLocator{*parts->row, *parts->column,
                                        parts->rowAbsolute, parts->columnAbsolute}},
                  1);
    }
    if (t->kind == TokenKind::Identifier && t->lexeme.front() != '\'' &&
        t->lexeme.front() != '[') {
      ++pos_;
      return node(Reference{sheet, workbook, DefinedNameRef{t->lexeme}}, 1);
    }
    fail({"reference"}, "expected a reference");
  }

  const std::vector<Token>& toks_;
  std::size_t pos_ = 0;
  int nesting_ = 0;
};

bool needsQuoting(const std::string& sheet) {
  if (sheet.empty()) return true;
  if (!(isAlpha(sheet[0]) || sheet[0] == '_' || sheet[0] == '\\')) return true;
  for (char c : sheet)
    if (!(isAlpha(c) || isDigit(c) || c == '_' || c == '.' || c == '\\'))
      return true;
  if (splitRefWord(sheet, true)) return true;
  std::string up = upper(sheet);
  return up == "TRUE" || up == "FALSE";
}

std::string formatBound(const RangeBound& b) {
  std::string out;
  if (b.column) {
    if (b.columnAbsolute) out += '$';
    out += columnIndexToLetters(*b.column);
  }
  if (b.row) {
    if (b.rowAbsolute) out += '$';
    out += std::to_string(*b.row);
  }
  return out;
}

std::string prefixFor(const std::optional<std::string>& workbook,
                      const std::optional<std::string>& sheet) {
  if (!sheet) return {};
  return formatSheetPrefix(workbook, *sheet) + "!";
}

void emit(const Expression& e, std::string& out) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Function>) {
          out += n.name;
          out += '(';
          for (std::size_t i = 0; i < n.args.size(); ++i) {
            if (i) out += ',';
            emit(n.args[i], out);
          }
          out += ')';
        } else if constexpr (std::is_same_v<T, Operator>) {
          if (n.kind == OperatorKind::Percent) {
            emit(n.operands[0], out);
            out += '%';
          } else if (isUnary(n.kind)) {
            out += symbol(n.kind);
            emit(n.operands[0], out);
          } else {
            emit(n.operands[0], out);
            out += symbol(n.kind);
            emit(n.operands[1], out);
          }
        } else if constexpr (std::is_same_v<T, Constant>) {
          out += n.lexeme;
        } else if constexpr (std::is_same_v<T, Parenthesis>) {
          out += '(';
          emit(*n.inner, out);
          out += ')';
        } else if constexpr (std::is_same_v<T, Reference>) {
          out += prefixFor(n.workbook, n.sheet);
          if (const auto* cell = std::get_if<CellLocator>(&n.target)) {
            out += formatBound(RangeBound{cell->row, cell->column,
                                          cell->rowAbsolute, cell->columnAbsolute});
          } else if (const auto* name = std::get_if<DefinedNameRef>(&n.target)) {
            out += name->name;
          } else {
            out += "#REF!";
          }
        } else if constexpr (std::is_same_v<T, Range>) {
          out += prefixFor(n.workbook, n.sheet);
          out += formatBound(n.start);
          out += ':';
          out += formatBound(n.end);
        }
      },
      e.node);
}

}  // namespace

std::string_view toString(TokenKind kind) {
  switch (kind) {
    case TokenKind::Number: return "number";
    case TokenKind::String: return "string";
    case TokenKind::Boolean: return "boolean";
    case TokenKind::ErrorLiteral: return "errorLiteral";
    case TokenKind::Identifier: return "identifier";
    case TokenKind::CellRef: return "cellRef";
    case TokenKind::OperatorSymbol: return "operatorSymbol";
    case TokenKind::LeftParen: return "leftParen";
    case TokenKind::RightParen: return "rightParen";
    case TokenKind::Comma: return "comma";
    case TokenKind::Colon: return "colon";
    case TokenKind::Exclamation: return "exclamation";
  }
  return "?";
}

std::string Token::text() const {
  if (kind != TokenKind::String || lexeme.size() < 2) return lexeme;
  std::string out;
  std::string_view inner(lexeme.data() + 1, lexeme.size() - 2);
  for (std::size_t i = 0; i < inner.size(); ++i) {
    out.push_back(inner[i]);
    if (inner[i] == '"' && i + 1 < inner.size() && inner[i + 1] == '"') ++i;
  }
  return out;
}

bool isUnary(OperatorKind kind) {
  return kind == OperatorKind::Percent || kind == OperatorKind::UnaryMinus ||
         kind == OperatorKind::UnaryPlus;
}

std::string_view symbol(OperatorKind kind) {
  switch (kind) {
    case OperatorKind::Add: return "+";
    case OperatorKind::Sub: return "-";
    case OperatorKind::Mul: return "*";
    case OperatorKind::Div: return "/";
    case OperatorKind::Pow: return "^";
    case OperatorKind::Concat: return "&";
    case OperatorKind::Eq: return "=";
    case OperatorKind::Neq: return "<>";
    case OperatorKind::Lt: return "<";
    case OperatorKind::Gt: return ">";
    case OperatorKind::Le: return "<=";
    case OperatorKind::Ge: return ">=";
    case OperatorKind::Percent: return "%";
    case OperatorKind::UnaryMinus: return "-";
    case OperatorKind::UnaryPlus: return "+";
  }
  return "?";
}

std::vector<const Expression*> children(const Expression& expr) {
  std::vector<const Expression*> out;
  if (const auto* f = expr.get_if<Function>()) {
    for (const auto& a : f->args) out.push_back(&a);
  } else if (const auto* op = expr.get_if<Operator>()) {
    for (const auto& a : op->operands) out.push_back(&a);
  } else if (const auto* p = expr.get_if<Parenthesis>()) {
    out.push_back(&*p->inner);
  }
  return out;
}

std::vector<Token> tokenize(std::string_view formula) {
  return Lexer(formula).run();
}

Expression parse(const std::vector<Token>& tokens) {
  return Parser(tokens).run();
}

Expression parseFormula(std::string_view formula) {
  if (!formula.empty() && formula.front() == '=') formula.remove_prefix(1);
  return parse(tokenize(formula));
}

std::string serialize(const Expression& expr) {
  std::string out;
  emit(expr, out);
  return out;
}

std::string formatSheetPrefix(const std::optional<std::string>& workbook,
                              const std::string& sheet) {
  std::string raw = workbook ? "[" + *workbook + "]" + sheet : sheet;
  bool quote = needsQuoting(sheet) ||
               (workbook && workbook->find_first_of(" '!") != std::string::npos);
  if (!quote) return raw;
  std::string out = "'";
  for (char c : raw) {
    out += c;
    if (c == '\'') out += '\'';
  }
  out += '\'';
  return out;
}

std::string translateFormula(std::string_view formula, int rowOffset,
                             int columnOffset) {
  std::string_view body = formula;
  std::string out;
  if (!body.empty() && body.front() == '=') {
    out += '=';
    body.remove_prefix(1);
  }
  std::vector<Token> toks = tokenize(body);

  auto shiftRow = [&](int row) { return row + rowOffset; };
  auto shiftCol = [&](int col) { return col + columnOffset; };
  auto rewriteBound = [&](RangeBound b) -> std::optional<std::string> {
    if (b.row && !b.rowAbsolute) b.row = shiftRow(*b.row);
    if (b.column && !b.columnAbsolute) b.column = shiftCol(*b.column);
    if ((b.row && (*b.row < 1 || *b.row > kMaxRows)) ||
        (b.column && (*b.column < 1 || *b.column > kMaxColumns)))
      return std::nullopt;
    return formatBound(b);
  };

  std::size_t cursor = 0;
  for (std::size_t i = 0; i < toks.size(); ++i) {
    const Token& t = toks[i];
    bool afterColon = i > 0 && toks[i - 1].kind == TokenKind::Colon;
    bool beforeColon = i + 1 < toks.size() && toks[i + 1].kind == TokenKind::Colon;
    bool isFunctionName = i + 1 < toks.size() && toks[i + 1].kind == TokenKind::LeftParen;
    bool isSheet = i + 1 < toks.size() && toks[i + 1].kind == TokenKind::Exclamation;

    std::optional<RangeBound> b;
    if (t.kind == TokenKind::CellRef && !isSheet) {
      if (auto parts = splitRefWord(t.lexeme, true))
        b = RangeBound{parts->row, parts->column, parts->rowAbsolute,
                       parts->columnAbsolute};
    } else if ((afterColon || beforeColon) && !isFunctionName && !isSheet) {
      if (t.kind == TokenKind::Identifier) {
        if (auto col = asColumnWord(t.lexeme)) b = RangeBound{std::nullopt, col};
      } else if (t.kind == TokenKind::Number) {
        if (auto row = asRowNumber(t.lexeme)) b = RangeBound{row, std::nullopt};
      }
    }
    if (!b) continue;
    out.append(body.substr(cursor, t.span.begin - cursor));
    auto rewritten = rewriteBound(*b);
    out += rewritten ? *rewritten : std::string("#REF!");
    cursor = t.span.end;
  }
  out.append(body.substr(cursor));
  return out;
}

}  // namespace cellgauge
