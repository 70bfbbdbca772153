#pragma once

#include <map>
#include <set>
#include <span>
#include <vector>

#include "cellgauge/coordinate.hpp"
#include "cellgauge/expression.hpp"
#include "cellgauge/workbook.hpp"

namespace cellgauge {

// A resolved rectangle of cells on one sheet, bounds inclusive.
struct CellBlock {
  int sheet = 1;
  int firstRow = 1;
  int lastRow = 1;
  int firstColumn = 1;
  int lastColumn = 1;

  bool singleCell() const { return firstRow == lastRow && firstColumn == lastColumn; }
  long long size() const {
    return static_cast<long long>(lastRow - firstRow + 1) * (lastColumn - firstColumn + 1);
  }
  bool operator==(const CellBlock&) const = default;
};

struct ResolvedReferences {
  // One block per resolved Reference/Range node, in tree order. A clipped
  // full-column range on an empty sheet yields no block.
  std::vector<CellBlock> blocks;
  // Union of all blocks, sorted and deduplicated.
  std::vector<CellCoordinate> targets;
  // Reference nodes that could not be resolved: unknown names or sheets,
  // external workbooks, #REF! targets.
  int danglingCount = 0;
};

// Resolves every reference in `formula` as seen from `origin`. Unqualified
// references bind to the origin's sheet; defined names resolve through the
// workbook; open-ended ranges (A:A, 1:1) clip to the target sheet's used
// range.
ResolvedReferences resolveReferences(const CellCoordinate& origin,
                                     const Expression& formula,
                                     const Workbook& workbook);

// Formula cell -> referenced cells, plus the transpose.
class DependencyGraph {
 public:
  DependencyGraph() = default;

  // Includes parse failures, which have no edges.
  const std::set<CellCoordinate>& formulaCells() const { return formulaCells_; }
  bool isFormulaCell(const CellCoordinate& c) const { return formulaCells_.count(c) > 0; }

  const std::map<CellCoordinate, ResolvedReferences>& forward() const { return forward_; }
  const std::map<CellCoordinate, std::vector<CellCoordinate>>& reverse() const {
    return reverse_;
  }

  std::span<const CellCoordinate> referencedBy(const CellCoordinate& formula) const;
  std::span<const CellCoordinate> referrersOf(const CellCoordinate& cell) const;
  const ResolvedReferences* links(const CellCoordinate& formula) const;

  bool isReferenced(const CellCoordinate& c) const { return reverse_.count(c) > 0; }

  // Both throw NotAFormulaCell for coordinates without a formula.
  int fanOut(const CellCoordinate& formula) const;
  int fanIn(const CellCoordinate& formula) const;
  int danglingCount(const CellCoordinate& formula) const;

  std::size_t edgeCount() const;

  friend DependencyGraph buildGraph(const Workbook& workbook);

 private:
  std::set<CellCoordinate> formulaCells_;
  std::map<CellCoordinate, ResolvedReferences> forward_;
  std::map<CellCoordinate, std::vector<CellCoordinate>> reverse_;
};

DependencyGraph buildGraph(const Workbook& workbook);

}  // namespace cellgauge
