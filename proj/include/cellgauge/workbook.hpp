#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "cellgauge/coordinate.hpp"
#include "cellgauge/expression.hpp"

namespace cellgauge {

struct VisualProperty {
  std::string key;
  std::string value;
  bool operator==(const VisualProperty&) const = default;
};

struct Literal {
  ValueType type = ValueType::Number;
  // double for Number, bool for Boolean, text for Text and Error
  std::variant<double, std::string, bool> value = 0.0;

  static Literal number(double v) { return {ValueType::Number, v}; }
  static Literal text(std::string v) { return {ValueType::Text, std::move(v)}; }
  static Literal boolean(bool v) { return {ValueType::Boolean, v}; }
  static Literal error(std::string v) { return {ValueType::Error, std::move(v)}; }

  bool operator==(const Literal&) const = default;
};

// A formula keeps its source text even when it fails to parse.
class FormulaContent {
 public:
  // `text` includes the leading '='.
  explicit FormulaContent(std::string text,
                          std::optional<ValueType> cachedType = std::nullopt);

  const std::string& text() const { return text_; }
  // Null when parsing failed.
  const Expression* ast() const { return ast_.get(); }
  bool parsed() const { return ast_ != nullptr; }
  const std::string& parseFailure() const { return failure_; }
  // Type of the last computed result, when the file recorded one.
  std::optional<ValueType> cachedType() const { return cachedType_; }

  bool operator==(const FormulaContent& o) const {
    return text_ == o.text_ && cachedType_ == o.cachedType_;
  }

 private:
  std::string text_;
  std::shared_ptr<const Expression> ast_;
  std::string failure_;
  std::optional<ValueType> cachedType_;
};

struct Cell {
  CellCoordinate coordinate;
  std::variant<std::monostate, Literal, FormulaContent> content;
  std::vector<VisualProperty> visualProperties;

  bool hasContent() const { return !std::holds_alternative<std::monostate>(content); }
  bool isFormula() const { return std::holds_alternative<FormulaContent>(content); }
  const FormulaContent* formula() const { return std::get_if<FormulaContent>(&content); }
  const Literal* literal() const { return std::get_if<Literal>(&content); }
  std::optional<ValueType> valueType() const;

  bool operator==(const Cell&) const = default;
};

enum class CellKind { Empty, Label, InputValue, Formula };
std::string_view toString(CellKind kind);

// Bounding box of the stored cells of a sheet.
struct UsedRange {
  int firstRow = 0;
  int lastRow = 0;
  int firstColumn = 0;
  int lastColumn = 0;
  bool empty() const { return lastRow == 0; }
};

class Worksheet {
 public:
  using Key = std::pair<int, int>;  // (row, column)

  Worksheet(std::string name, int index) : name_(std::move(name)), index_(index) {}

  const std::string& name() const { return name_; }
  int index() const { return index_; }
  const std::map<Key, Cell>& cells() const { return cells_; }
  const Cell* find(int row, int column) const;
  const UsedRange& usedRange() const { return used_; }

  void setLiteral(int row, int column, Literal value);
  // `text` must start with '='; parse errors are recorded on the cell.
  void setFormula(int row, int column, std::string text,
                  std::optional<ValueType> cachedType = std::nullopt);
  void setVisualProperty(int row, int column, VisualProperty property);
  void erase(int row, int column);

  bool operator==(const Worksheet& o) const {
    return name_ == o.name_ && index_ == o.index_ && cells_ == o.cells_;
  }

 private:
  Cell& slot(int row, int column);
  void recomputeUsedRange();

  std::string name_;
  int index_;
  std::map<Key, Cell> cells_;
  UsedRange used_;
};

struct CaseInsensitiveLess {
  using is_transparent = void;
  bool operator()(std::string_view a, std::string_view b) const;
};

// Built single-threaded, then shared read-only.
class Workbook {
 public:
  explicit Workbook(std::string name = {}) : name_(std::move(name)) {}

  const std::string& name() const { return name_; }
  void setName(std::string name) { name_ = std::move(name); }

  const std::vector<Worksheet>& sheets() const { return sheets_; }
  Worksheet& addSheet(std::string name);
  Worksheet& sheet(std::size_t zeroBased) { return sheets_.at(zeroBased); }
  // Case-insensitive lookup.
  const Worksheet* findSheet(std::string_view name) const;
  Worksheet* findSheet(std::string_view name);
  const Worksheet* sheetByIndex(int oneBased) const;
  const Cell* cellAt(const CellCoordinate& c) const;

  const std::map<std::string, std::string, CaseInsensitiveLess>& definedNames() const {
    return names_;
  }
  // Target text such as "Sheet1!$A$1:$B$2", with or without a leading '='.
  void defineName(std::string name, std::string target);
  const std::string* findName(std::string_view name) const;

  bool operator==(const Workbook& o) const {
    return name_ == o.name_ && sheets_ == o.sheets_ && names_ == o.names_;
  }

 private:
  std::string name_;
  std::vector<Worksheet> sheets_;
  std::map<std::string, std::string, CaseInsensitiveLess> names_;
};

class DependencyGraph;

// Total over every stored cell plus every resolved reference target.
std::map<CellCoordinate, CellKind> classifyCells(const Workbook& workbook,
                                                 const DependencyGraph& graph);

}  // namespace cellgauge
