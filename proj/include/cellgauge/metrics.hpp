#pragma once

#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cellgauge/dependency_graph.hpp"
#include "cellgauge/expression.hpp"
#include "cellgauge/workbook.hpp"

namespace cellgauge {

inline constexpr std::size_t kMetricCount = 22;

struct MetricInfo {
  std::string_view id;     // "M01"
  std::string_view name;   // "avgAstDepth"
  std::string_view label;  // row label of the corpus summary
  bool integral;           // per-spreadsheet value is always a whole number
  bool ratio;              // defaults to a [0, 1] histogram
};

const std::array<MetricInfo, kMetricCount>& metricCatalog();
// Accepts "M04", "m04" or the camelCase name. Returns the 0-based slot.
std::optional<std::size_t> metricIndex(std::string_view idOrName);

struct MetricsConfig {
  std::set<std::string> conditionalFunctions = defaultConditionalFunctions();

  static std::set<std::string> defaultConditionalFunctions();
};

int astDepth(const Expression& expr);
int elementCount(const Expression& expr);
// (total Function nodes, distinct uppercase names)
std::pair<int, int> functionCounts(const Expression& expr);
int conditionalCount(const Expression& expr,
                     const std::set<std::string>& conditionalFunctions =
                         MetricsConfig::defaultConditionalFunctions());
// Serialization with every Reference as REF and every Range as RANGE.
std::string normalizedKey(const Expression& expr);

// Largest Euclidean distance between any two referenced cells, with (row,
// column, sheet index) as coordinates. Ranges contribute their corners only,
// which is enough since the farthest pair of a set of boxes is attained at
// corners. 0 when the formula has fewer than two points.
double spreadingFactor(const ResolvedReferences& links);
double spreadingFactor(const CellCoordinate& formula, const DependencyGraph& graph);

struct FormulaMetrics {
  int astDepth = 0;
  int elementCount = 0;
  int functionCount = 0;
  int distinctFunctionCount = 0;
  int conditionalCount = 0;
  int fanOut = 0;
  int fanIn = 0;
  double spreadingFactor = 0.0;
  std::string normalizedKey;
};

FormulaMetrics measureFormula(const CellCoordinate& cell, const Expression& expr,
                              const DependencyGraph& graph,
                              const MetricsConfig& config = {});

struct MetricRecord {
  std::string workbookId;
  int sheetCount = 0;
  long long nonEmptyCellCount = 0;
  long long inputCellCount = 0;
  long long formulaCellCount = 0;
  long long parseFailureCount = 0;
  // Indexed by catalog slot; nullopt means absent (empty set or 0 denominator).
  std::array<std::optional<double>, kMetricCount> values{};

  const std::optional<double>& operator[](std::size_t slot) const { return values[slot]; }
  std::optional<double> get(std::string_view id) const;

  bool operator==(const MetricRecord&) const = default;
};

MetricRecord computeRecord(const Workbook& workbook, const DependencyGraph& graph,
                           const std::map<CellCoordinate, CellKind>& classification,
                           const MetricsConfig& config = {});

// buildGraph + classifyCells + computeRecord.
MetricRecord analyzeWorkbook(const Workbook& workbook, const MetricsConfig& config = {});

}  // namespace cellgauge
