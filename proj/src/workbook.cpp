#include "cellgauge/workbook.hpp"

#include <algorithm>
#include <cctype>

#include "cellgauge/error.hpp"
#include "cellgauge/formula.hpp"

namespace cellgauge {

FormulaContent::FormulaContent(std::string text,
                               std::optional<ValueType> cachedType)
    : text_(std::move(text)), cachedType_(cachedType) {
  try {
    ast_ = std::make_shared<const Expression>(parseFormula(text_));
  } catch (const Error& e) {
    failure_ = e.what();
  }
}

std::optional<ValueType> Cell::valueType() const {
  if (const auto* lit = literal()) return lit->type;
  if (const auto* f = formula()) return f->cachedType();
  return std::nullopt;
}

std::string_view toString(CellKind kind) {
  switch (kind) {
    case CellKind::Empty: return "empty";
    case CellKind::Label: return "label";
    case CellKind::InputValue: return "input";
    case CellKind::Formula: return "formula";
  }
  return "empty";
}

const Cell* Worksheet::find(int row, int column) const {
  auto it = cells_.find({row, column});
  return it == cells_.end() ? nullptr : &it->second;
}

Cell& Worksheet::slot(int row, int column) {
  if (row < 1 || column < 1 || row > kMaxRows || column > kMaxColumns)
    throw Error("cell coordinate out of range: row " + std::to_string(row) +
                ", column " + std::to_string(column));
  auto [it, inserted] = cells_.try_emplace({row, column});
  if (inserted) {
    it->second.coordinate = CellCoordinate{index_, row, column};
    if (used_.empty()) {
      used_ = UsedRange{row, row, column, column};
    } else {
      used_.firstRow = std::min(used_.firstRow, row);
      used_.lastRow = std::max(used_.lastRow, row);
      used_.firstColumn = std::min(used_.firstColumn, column);
      used_.lastColumn = std::max(used_.lastColumn, column);
    }
  }
  return it->second;
}

void Worksheet::setLiteral(int row, int column, Literal value) {
  slot(row, column).content = std::move(value);
}

void Worksheet::setFormula(int row, int column, std::string text,
                           std::optional<ValueType> cachedType) {
  if (text.empty() || text.front() != '=') text.insert(text.begin(), '=');
  slot(row, column).content = FormulaContent(std::move(text), cachedType);
}

void Worksheet::setVisualProperty(int row, int column, VisualProperty property) {
  auto& props = slot(row, column).visualProperties;
  auto it = std::find_if(props.begin(), props.end(),
                         [&](const auto& p) { return p.key == property.key; });
  if (it != props.end())
    *it = std::move(property);
  else
    props.push_back(std::move(property));
}

void Worksheet::erase(int row, int column) {
  if (cells_.erase({row, column})) recomputeUsedRange();
}

void Worksheet::recomputeUsedRange() {
  used_ = UsedRange{};
  for (const auto& [key, cell] : cells_) {
    if (used_.empty()) {
      used_ = UsedRange{key.first, key.first, key.second, key.second};
      continue;
    }
    used_.firstRow = std::min(used_.firstRow, key.first);
    used_.lastRow = std::max(used_.lastRow, key.first);
    used_.firstColumn = std::min(used_.firstColumn, key.second);
    used_.lastColumn = std::max(used_.lastColumn, key.second);
  }
}

bool CaseInsensitiveLess::operator()(std::string_view a, std::string_view b) const {
  return std::lexicographical_compare(
      a.begin(), a.end(), b.begin(), b.end(), [](char x, char y) {
        return std::toupper(static_cast<unsigned char>(x)) <
               std::toupper(static_cast<unsigned char>(y));
      });
}

Worksheet& Workbook::addSheet(std::string name) {
  if (name.empty()) throw Error("sheet name must not be empty");
  if (findSheet(name)) throw Error("duplicate sheet name: " + name);
  int index = static_cast<int>(sheets_.size()) + 1;
  return sheets_.emplace_back(std::move(name), index);
}

const Worksheet* Workbook::findSheet(std::string_view name) const {
  CaseInsensitiveLess less;
  for (const auto& s : sheets_)
    if (!less(s.name(), name) && !less(name, s.name())) return &s;
  return nullptr;
}

Worksheet* Workbook::findSheet(std::string_view name) {
  return const_cast<Worksheet*>(std::as_const(*this).findSheet(name));
}

const Worksheet* Workbook::sheetByIndex(int oneBased) const {
  if (oneBased < 1 || oneBased > static_cast<int>(sheets_.size())) return nullptr;
  return &sheets_[static_cast<std::size_t>(oneBased - 1)];
}

const Cell* Workbook::cellAt(const CellCoordinate& c) const {
  const Worksheet* s = sheetByIndex(c.sheet);
  return s ? s->find(c.row, c.column) : nullptr;
}

void Workbook::defineName(std::string name, std::string target) {
  if (name.empty()) throw Error("defined name must not be empty");
  names_.insert_or_assign(std::move(name), std::move(target));
}

const std::string* Workbook::findName(std::string_view name) const {
  auto it = names_.find(name);
  return it == names_.end() ? nullptr : &it->second;
}

}  // namespace cellgauge
