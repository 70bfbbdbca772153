#include "cellgauge/dependency_graph.hpp"
#include "cellgauge/workbook.hpp"

namespace cellgauge {

std::map<CellCoordinate, CellKind> classifyCells(const Workbook& workbook,
                                                 const DependencyGraph& graph) {
  std::map<CellCoordinate, CellKind> kinds;
  for (const auto& sheet : workbook.sheets()) {
    for (const auto& [key, cell] : sheet.cells()) {
      CellKind kind;
      if (cell.isFormula())
        kind = CellKind::Formula;
      else if (graph.isReferenced(cell.coordinate))
        kind = CellKind::InputValue;
      else if (cell.hasContent())
        kind = CellKind::Label;
      else
        kind = CellKind::Empty;
      kinds.emplace_hint(kinds.end(), cell.coordinate, kind);
    }
  }
  // Referenced coordinates with no stored cell are empty inputs.
  for (const auto& [target, referrers] : graph.reverse()) {
    kinds.try_emplace(target, CellKind::InputValue);
  }
  return kinds;
}

}  // namespace cellgauge
