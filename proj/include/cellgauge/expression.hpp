#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <type_traits>
#include <variant>
#include <vector>

#include "cellgauge/coordinate.hpp"

namespace cellgauge {

struct Expression;

// Copyable owning pointer with value semantics, used for recursive nodes.
template <typename T>
class Boxed {
 public:
  Boxed(T value) : ptr_(std::make_unique<T>(std::move(value))) {}
  Boxed(const Boxed& other) : ptr_(std::make_unique<T>(*other.ptr_)) {}
  Boxed(Boxed&&) noexcept = default;
  Boxed& operator=(const Boxed& other) {
    if (this != &other) ptr_ = std::make_unique<T>(*other.ptr_);
    return *this;
  }
  Boxed& operator=(Boxed&&) noexcept = default;

  const T& operator*() const { return *ptr_; }
  const T* operator->() const { return ptr_.get(); }
  T& operator*() { return *ptr_; }

  friend bool operator==(const Boxed& a, const Boxed& b) { return *a == *b; }

 private:
  std::unique_ptr<T> ptr_;
};

enum class OperatorKind {
  Add,
  Sub,
  Mul,
  Div,
  Pow,
  Concat,
  Eq,
  Neq,
  Lt,
  Gt,
  Le,
  Ge,
  Percent,
  UnaryMinus,
  UnaryPlus,
};

bool isUnary(OperatorKind kind);
std::string_view symbol(OperatorKind kind);

// One end of a reference. A full cell address has both row and column; a
// full-column bound ("A" in A:A) has only a column and a full-row bound only
// a row.
struct RangeBound {
  std::optional<int> row;
  std::optional<int> column;
  bool rowAbsolute = false;
  bool columnAbsolute = false;

  bool isCell() const { return row && column; }
  bool operator==(const RangeBound&) const = default;
};

struct CellLocator {
  int row = 1;
  int column = 1;
  bool rowAbsolute = false;
  bool columnAbsolute = false;

  bool operator==(const CellLocator&) const = default;
};

struct DefinedNameRef {
  std::string name;
  bool operator==(const DefinedNameRef&) const = default;
};

// Target destroyed by a structural edit, written as Sheet!#REF!.
struct BrokenTarget {
  bool operator==(const BrokenTarget&) const = default;
};

struct Function {
  std::string name;  // uppercase
  std::vector<Expression> args;
  bool operator==(const Function&) const;
};

struct Operator {
  OperatorKind kind = OperatorKind::Add;
  std::vector<Expression> operands;  // 1 for unary/percent, 2 otherwise
  bool operator==(const Operator&) const;
};

struct Constant {
  ValueType type = ValueType::Number;
  std::string lexeme;  // source text; strings keep their quotes
  bool operator==(const Constant&) const = default;
};

struct Parenthesis {
  Boxed<Expression> inner;
  bool operator==(const Parenthesis&) const;
};

struct Reference {
  std::optional<std::string> sheet;
  std::optional<std::string> workbook;  // set for [Book]Sheet!A1
  std::variant<CellLocator, DefinedNameRef, BrokenTarget> target;

  bool byName() const {
    return std::holds_alternative<DefinedNameRef>(target);
  }
  bool external() const { return workbook.has_value(); }
  bool operator==(const Reference&) const = default;
};

struct Range {
  std::optional<std::string> sheet;
  std::optional<std::string> workbook;
  RangeBound start;
  RangeBound end;

  bool external() const { return workbook.has_value(); }
  bool operator==(const Range&) const = default;
};

struct Expression {
  using Node =
      std::variant<Function, Operator, Constant, Parenthesis, Reference, Range>;
  Node node;

  template <typename T>
    requires(!std::is_same_v<std::decay_t<T>, Expression>)
  Expression(T value) : node(std::move(value)) {}

  template <typename T>
  bool is() const {
    return std::holds_alternative<T>(node);
  }
  template <typename T>
  const T& as() const {
    return std::get<T>(node);
  }
  template <typename T>
  const T* get_if() const {
    return std::get_if<T>(&node);
  }

  bool operator==(const Expression&) const = default;
};

inline bool Function::operator==(const Function& o) const {
  return name == o.name && args == o.args;
}
inline bool Operator::operator==(const Operator& o) const {
  return kind == o.kind && operands == o.operands;
}
inline bool Parenthesis::operator==(const Parenthesis& o) const {
  return inner == o.inner;
}

// Calls `visit(expr)` on every node, parents before children.
template <typename Visitor>
void forEachNode(const Expression& expr, Visitor&& visit) {
  visit(expr);
  if (const auto* f = expr.get_if<Function>()) {
    for (const auto& a : f->args) forEachNode(a, visit);
  } else if (const auto* op = expr.get_if<Operator>()) {
    for (const auto& a : op->operands) forEachNode(a, visit);
  } else if (const auto* p = expr.get_if<Parenthesis>()) {
    forEachNode(*p->inner, visit);
  }
}

// Children of a node in order (empty for leaves).
std::vector<const Expression*> children(const Expression& expr);

}  // namespace cellgauge
