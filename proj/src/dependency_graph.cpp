#include "cellgauge/dependency_graph.hpp"

#include <algorithm>
#include <cctype>
#include <memory>
#include <string>
#include <unordered_map>

#include "cellgauge/error.hpp"
#include "cellgauge/formula.hpp"

namespace cellgauge {

namespace {

constexpr int kMaxNameChain = 16;

// Literal rectangles larger than this are intersected with the used range;
// expanding e.g. $A$1:$IV$65536 cell by cell is not tractable per formula.
constexpr long long kMaxExpandedBlock = 1LL << 20;

class Resolver {
 public:
  explicit Resolver(const Workbook& wb) : wb_(wb) {}

  ResolvedReferences resolve(const CellCoordinate& origin, const Expression& expr) {
    ResolvedReferences out;
    walk(origin.sheet, expr, out, 0);
    for (const auto& b : out.blocks)
      for (int r = b.firstRow; r <= b.lastRow; ++r)
        for (int c = b.firstColumn; c <= b.lastColumn; ++c)
          out.targets.push_back(CellCoordinate{b.sheet, r, c});
    std::sort(out.targets.begin(), out.targets.end());
    out.targets.erase(std::unique(out.targets.begin(), out.targets.end()),
                      out.targets.end());
    return out;
  }

 private:
  // Returns 0 when the sheet does not exist in this workbook.
  int sheetIndex(int originSheet, const std::optional<std::string>& sheet) const {
    if (!sheet) return originSheet;
    const Worksheet* ws = wb_.findSheet(*sheet);
    return ws ? ws->index() : 0;
  }

  void walk(int sheet, const Expression& e, ResolvedReferences& out, int nameDepth) {
    if (const auto* ref = e.get_if<Reference>()) {
      reference(sheet, *ref, out, nameDepth);
      return;
    }
    if (const auto* range = e.get_if<Range>()) {
      rangeBlock(sheet, *range, out);
      return;
    }
    // A defined name whose target was deleted is stored as the literal #REF!.
    if (const auto* k = e.get_if<Constant>();
        k && nameDepth > 0 && k->type == ValueType::Error && k->lexeme == "#REF!") {
      ++out.danglingCount;
      return;
    }
    for (const Expression* child : children(e)) walk(sheet, *child, out, nameDepth);
  }

  void reference(int sheet, const Reference& ref, ResolvedReferences& out,
                 int nameDepth) {
    if (ref.external() || std::holds_alternative<BrokenTarget>(ref.target)) {
      ++out.danglingCount;
      return;
    }
    if (const auto* name = std::get_if<DefinedNameRef>(&ref.target)) {
      int scope = ref.sheet ? sheetIndex(sheet, ref.sheet) : sheet;
      const Expression* target = nameTarget(name->name);
      if (!target || nameDepth >= kMaxNameChain || scope == 0) {
        ++out.danglingCount;
        return;
      }
      walk(scope, *target, out, nameDepth + 1);
      return;
    }
    int target = sheetIndex(sheet, ref.sheet);
    if (target == 0) {
      ++out.danglingCount;
      return;
    }
    const auto& cell = std::get<CellLocator>(ref.target);
    out.blocks.push_back(CellBlock{target, cell.row, cell.row, cell.column, cell.column});
  }

  void rangeBlock(int sheet, const Range& range, ResolvedReferences& out) {
    int target = range.external() ? 0 : sheetIndex(sheet, range.sheet);
    if (target == 0) {
      ++out.danglingCount;
      return;
    }
    const UsedRange& used = wb_.sheetByIndex(target)->usedRange();
    CellBlock b{target, 0, 0, 0, 0};
    if (range.start.row && range.end.row) {
      b.firstRow = std::min(*range.start.row, *range.end.row);
      b.lastRow = std::max(*range.start.row, *range.end.row);
    } else {
      if (used.empty()) return;
      b.firstRow = used.firstRow;
      b.lastRow = used.lastRow;
    }
    if (range.start.column && range.end.column) {
      b.firstColumn = std::min(*range.start.column, *range.end.column);
      b.lastColumn = std::max(*range.start.column, *range.end.column);
    } else {
      if (used.empty()) return;
      b.firstColumn = used.firstColumn;
      b.lastColumn = used.lastColumn;
    }
    if (b.size() > kMaxExpandedBlock) {
      if (used.empty()) return;
      b.firstRow = std::max(b.firstRow, used.firstRow);
      b.lastRow = std::min(b.lastRow, used.lastRow);
      b.firstColumn = std::max(b.firstColumn, used.firstColumn);
      b.lastColumn = std::min(b.lastColumn, used.lastColumn);
      if (b.firstRow > b.lastRow || b.firstColumn > b.lastColumn) return;
    }
    out.blocks.push_back(b);
  }

  const Expression* nameTarget(const std::string& name) {
    std::string key = name;
    for (auto& c : key) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    auto it = names_.find(key);
    if (it != names_.end()) return it->second.get();
    std::unique_ptr<Expression> parsed;
    if (const std::string* text = wb_.findName(name)) {
      try {
        parsed = std::make_unique<Expression>(parseFormula(*text));
      } catch (const Error&) {
      }
    }
    return names_.emplace(key, std::move(parsed)).first->second.get();
  }

  const Workbook& wb_;
  std::unordered_map<std::string, std::unique_ptr<Expression>> names_;
};

}  // namespace

ResolvedReferences resolveReferences(const CellCoordinate& origin,
                                     const Expression& formula,
                                     const Workbook& workbook) {
  return Resolver(workbook).resolve(origin, formula);
}

std::span<const CellCoordinate> DependencyGraph::referencedBy(
    const CellCoordinate& formula) const {
  auto it = forward_.find(formula);
  if (it == forward_.end()) return {};
  return it->second.targets;
}

std::span<const CellCoordinate> DependencyGraph::referrersOf(
    const CellCoordinate& cell) const {
  auto it = reverse_.find(cell);
  if (it == reverse_.end()) return {};
  return it->second;
}

const ResolvedReferences* DependencyGraph::links(const CellCoordinate& formula) const {
  auto it = forward_.find(formula);
  return it == forward_.end() ? nullptr : &it->second;
}

int DependencyGraph::fanOut(const CellCoordinate& formula) const {
  if (!isFormulaCell(formula)) throw NotAFormulaCell("not a formula cell");
  return static_cast<int>(referencedBy(formula).size());
}

int DependencyGraph::fanIn(const CellCoordinate& formula) const {
  if (!isFormulaCell(formula)) throw NotAFormulaCell("not a formula cell");
  return static_cast<int>(referrersOf(formula).size());
}

int DependencyGraph::danglingCount(const CellCoordinate& formula) const {
  if (!isFormulaCell(formula)) throw NotAFormulaCell("not a formula cell");
  const auto* l = links(formula);
  return l ? l->danglingCount : 0;
}

std::size_t DependencyGraph::edgeCount() const {
  std::size_t n = 0;
  for (const auto& [f, links] : forward_) n += links.targets.size();
  return n;
}

DependencyGraph buildGraph(const Workbook& workbook) {
  DependencyGraph g;
  Resolver resolver(workbook);
  for (const auto& sheet : workbook.sheets()) {
    for (const auto& [key, cell] : sheet.cells()) {
      const FormulaContent* f = cell.formula();
      if (!f) continue;
      g.formulaCells_.insert(cell.coordinate);
      if (!f->parsed()) continue;
      auto resolved = resolver.resolve(cell.coordinate, *f->ast());
      for (const auto& target : resolved.targets)
        g.reverse_[target].push_back(cell.coordinate);
      g.forward_.emplace(cell.coordinate, std::move(resolved));
    }
  }
  // Formulas are visited in coordinate order, so every referrer list is
  // already sorted and duplicate-free.
  return g;
}

}  // namespace cellgauge
