#include "cellgauge/metrics.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <tuple>

#include "cellgauge/error.hpp"
#include "cellgauge/formula.hpp"

namespace cellgauge {

namespace {

constexpr std::array<MetricInfo, kMetricCount> kCatalog = {{
    {"M01", "avgAstDepth", "Average AST depth per formula", false, false},
    {"M02", "maxAstDepth", "Max AST depth per formula", true, false},
    {"M03", "formulaCellCount", "Number of formula cells", true, false},
    {"M04", "formulaToNonEmptyRatio", "Ratio of formula cells to non-empty cells", false, true},
    {"M05", "inputCellCount", "Number of input cells", true, false},
    {"M06", "inputToNonEmptyRatio", "Ratio of input cells to non-empty cells", false, true},
    {"M07", "formulaToInputRatio", "Ratio of formula cells to input cells", false, false},
    {"M08", "distinctFormulaCount", "Number of distinct formulas", true, false},
    {"M09", "avgFanOut", "Average fan-out per formula", false, false},
    {"M10", "maxFanOut", "Max fan-out per formula", true, false},
    {"M11", "avgFanIn", "Average fan-in per formula", false, false},
    {"M12", "maxFanIn", "Max fan-in per formula", true, false},
    {"M13", "avgConditionals", "Average number of conditionals per formula", false, false},
    {"M14", "maxConditionals", "Max number of conditionals per formula", true, false},
    {"M15", "avgSpreadingFactor", "Average spreading factor per formula", false, false},
    {"M16", "maxSpreadingFactor", "Max spreading factor per formula", false, false},
    {"M17", "avgFunctions", "Average number of functions per formula", false, false},
    {"M18", "maxFunctions", "Max number of functions per formula", true, false},
    {"M19", "avgDistinctFunctions", "Average number of distinct functions per formula", false, false},
    {"M20", "maxDistinctFunctions", "Max number of distinct functions per formula", true, false},
    {"M21", "avgElements", "Average number of elements per formula", false, false},
    {"M22", "maxElements", "Max number of elements per formula", true, false},
}};

bool equalsIgnoreCase(std::string_view a, std::string_view b) {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::toupper(static_cast<unsigned char>(x)) ==
                  std::toupper(static_cast<unsigned char>(y));
         });
}

Expression wildcard(const Expression& e) {
  if (e.is<Reference>()) return Reference{std::nullopt, std::nullopt, DefinedNameRef{"REF"}};
  if (e.is<Range>()) return Reference{std::nullopt, std::nullopt, DefinedNameRef{"RANGE"}};
  if (const auto* f = e.get_if<Function>()) {
    Function out{f->name, {}};
    out.args.reserve(f->args.size());
    for (const auto& a : f->args) out.args.push_back(wildcard(a));
    return out;
  }
  if (const auto* op = e.get_if<Operator>()) {
    Operator out{op->kind, {}};
    for (const auto& a : op->operands) out.operands.push_back(wildcard(a));
    return out;
  }
  if (const auto* p = e.get_if<Parenthesis>()) return Parenthesis{wildcard(*p->inner)};
  return e;
}

// Running avg/max over one per-formula quantity.
struct Stat {
  double sum = 0;
  double min = 0;
  double max = 0;
  long long n = 0;

  void add(double v) {
    min = n == 0 ? v : std::min(min, v);
    max = n == 0 ? v : std::max(max, v);
    sum += v;
    ++n;
  }
  // Clamped so rounding in the sum never pushes the mean outside [min, max].
  std::optional<double> mean() const {
    if (n == 0) return std::nullopt;
    return std::clamp(sum / static_cast<double>(n), min, max);
  }
  std::optional<double> maximum() const {
    if (n == 0) return std::nullopt;
    return max;
  }
};

std::optional<double> ratio(long long num, long long den) {
  if (den == 0) return std::nullopt;
  return static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

const std::array<MetricInfo, kMetricCount>& metricCatalog() { return kCatalog; }

std::optional<std::size_t> metricIndex(std::string_view idOrName) {
  for (std::size_t i = 0; i < kCatalog.size(); ++i)
    if (equalsIgnoreCase(kCatalog[i].id, idOrName) ||
        equalsIgnoreCase(kCatalog[i].name, idOrName))
      return i;
  return std::nullopt;
}

std::set<std::string> MetricsConfig::defaultConditionalFunctions() {
  return {"IF",     "IFS",     "IFERROR",   "IFNA",       "COUNTIF",
          "COUNTIFS", "SUMIF", "SUMIFS", "AVERAGEIF", "AVERAGEIFS"};
}

int astDepth(const Expression& expr) {
  int deepest = 0;
  for (const Expression* child : children(expr)) deepest = std::max(deepest, astDepth(*child));
  return 1 + deepest;
}

int elementCount(const Expression& expr) {
  int n = 0;
  forEachNode(expr, [&](const Expression&) { ++n; });
  return n;
}

std::pair<int, int> functionCounts(const Expression& expr) {
  int total = 0;
  std::set<std::string> names;
  forEachNode(expr, [&](const Expression& e) {
    if (const auto* f = e.get_if<Function>()) {
      ++total;
      std::string up = f->name;
      for (auto& c : up) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
      names.insert(std::move(up));
    }
  });
  return {total, static_cast<int>(names.size())};
}

int conditionalCount(const Expression& expr,
                     const std::set<std::string>& conditionalFunctions) {
  int n = 0;
  forEachNode(expr, [&](const Expression& e) {
    if (const auto* f = e.get_if<Function>()) {
      std::string up = f->name;
      for (auto& c : up) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
      if (conditionalFunctions.count(up)) ++n;
    }
  });
  return n;
}

std::string normalizedKey(const Expression& expr) { return serialize(wildcard(expr)); }

double spreadingFactor(const ResolvedReferences& links) {
  struct Point {
    std::int64_t row, column, sheet;
  };
  std::vector<Point> points;
  for (const auto& b : links.blocks) {
    if (b.singleCell()) {
      points.push_back({b.firstRow, b.firstColumn, b.sheet});
      continue;
    }
    for (int r : {b.firstRow, b.lastRow})
      for (int c : {b.firstColumn, b.lastColumn}) points.push_back({r, c, b.sheet});
  }
  std::int64_t best = 0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      std::int64_t dr = points[i].row - points[j].row;
      std::int64_t dc = points[i].column - points[j].column;
      std::int64_t ds = points[i].sheet - points[j].sheet;
      best = std::max(best, dr * dr + dc * dc + ds * ds);
    }
  }
  return std::sqrt(static_cast<double>(best));
}

double spreadingFactor(const CellCoordinate& formula, const DependencyGraph& graph) {
  if (!graph.isFormulaCell(formula)) throw NotAFormulaCell("not a formula cell");
  const auto* links = graph.links(formula);
  return links ? spreadingFactor(*links) : 0.0;
}

FormulaMetrics measureFormula(const CellCoordinate& cell, const Expression& expr,
                              const DependencyGraph& graph, const MetricsConfig& config) {
  FormulaMetrics m;
  m.astDepth = astDepth(expr);
  m.elementCount = elementCount(expr);
  std::tie(m.functionCount, m.distinctFunctionCount) = functionCounts(expr);
  m.conditionalCount = conditionalCount(expr, config.conditionalFunctions);
  m.fanOut = graph.fanOut(cell);
  m.fanIn = graph.fanIn(cell);
  m.spreadingFactor = spreadingFactor(cell, graph);
  m.normalizedKey = normalizedKey(expr);
  return m;
}

std::optional<double> MetricRecord::get(std::string_view id) const {
  auto slot = metricIndex(id);
  return slot ? values[*slot] : std::nullopt;
}

MetricRecord computeRecord(const Workbook& workbook, const DependencyGraph& graph,
                           const std::map<CellCoordinate, CellKind>& classification,
                           const MetricsConfig& config) {
  MetricRecord rec;
  rec.workbookId = workbook.name();
  rec.sheetCount = static_cast<int>(workbook.sheets().size());

  Stat depth, fanOut, fanIn, conditionals, spread, functions, distinctFunctions, elements;
  std::set<std::string> keys;
  for (const auto& sheet : workbook.sheets()) {
    for (const auto& [key, cell] : sheet.cells()) {
      if (cell.hasContent()) ++rec.nonEmptyCellCount;
      const FormulaContent* f = cell.formula();
      if (!f) continue;
      ++rec.formulaCellCount;
      if (!f->parsed()) {
        ++rec.parseFailureCount;
        continue;
      }
      FormulaMetrics m = measureFormula(cell.coordinate, *f->ast(), graph, config);
      depth.add(m.astDepth);
      fanOut.add(m.fanOut);
      fanIn.add(m.fanIn);
      conditionals.add(m.conditionalCount);
      spread.add(m.spreadingFactor);
      functions.add(m.functionCount);
      distinctFunctions.add(m.distinctFunctionCount);
      elements.add(m.elementCount);
      keys.insert(std::move(m.normalizedKey));
    }
  }
  for (const auto& [coord, kind] : classification)
    if (kind == CellKind::InputValue) ++rec.inputCellCount;

  auto& v = rec.values;
  v[0] = depth.mean();
  v[1] = depth.maximum();
  v[2] = static_cast<double>(rec.formulaCellCount);
  v[3] = ratio(rec.formulaCellCount, rec.nonEmptyCellCount);
  v[4] = static_cast<double>(rec.inputCellCount);
  v[5] = ratio(rec.inputCellCount, rec.nonEmptyCellCount);
  v[6] = ratio(rec.formulaCellCount, rec.inputCellCount);
  if (depth.n > 0) v[7] = static_cast<double>(keys.size());
  v[8] = fanOut.mean();
  v[9] = fanOut.maximum();
  v[10] = fanIn.mean();
  v[11] = fanIn.maximum();
  v[12] = conditionals.mean();
  v[13] = conditionals.maximum();
  v[14] = spread.mean();
  v[15] = spread.maximum();
  v[16] = functions.mean();
  v[17] = functions.maximum();
  v[18] = distinctFunctions.mean();
  v[19] = distinctFunctions.maximum();
  v[20] = elements.mean();
  v[21] = elements.maximum();
  return rec;
}

MetricRecord analyzeWorkbook(const Workbook& workbook, const MetricsConfig& config) {
  DependencyGraph graph = buildGraph(workbook);
  auto kinds = classifyCells(workbook, graph);
  return computeRecord(workbook, graph, kinds, config);
}

}  // namespace cellgauge
