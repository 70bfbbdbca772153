#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cellgauge/metrics.hpp"

namespace cellgauge {

struct CorpusSummary {
  std::size_t spreadsheetCount = 0;
  double ratioWithFormulas = 0.0;
  // Mean over the records where the metric is present; nullopt if none.
  std::array<std::optional<double>, kMetricCount> mean{};
  std::array<std::size_t, kMetricCount> present{};
};

// Throws EmptyCorpus.
CorpusSummary aggregate(std::span<const MetricRecord> records);

struct HistogramSpec {
  // Unset range means min..max of the observed values.
  std::optional<double> low;
  std::optional<double> high;
  std::optional<int> bins;

  static HistogramSpec fixed(double low, double high, int bins) { return {low, high, bins}; }
  static HistogramSpec automatic(int bins = 20) { return {std::nullopt, std::nullopt, bins}; }
};

struct Histogram {
  std::string metricId;
  std::vector<double> binEdges;  // bins + 1 ascending edges
  std::vector<std::size_t> counts;
};

// Bins are [e_i, e_{i+1}) except the last, which is closed. Values outside a
// fixed range land in the nearest end bin so every present value is counted.
// Ratio metrics default to [0, 1] x 20 when no range is given;
// everything else defaults to the observed range. Throws NoData.
Histogram histogram(std::span<const MetricRecord> records, std::size_t metricSlot,
                    const HistogramSpec& spec = {});
Histogram histogram(std::span<const double> values, const std::string& metricId,
                    double low, double high, int bins);

enum class CorrelationMethod { Pearson, Spearman };

struct Correlation {
  std::optional<double> r;  // absent when n < 2 or a variance is 0
  std::size_t n = 0;
};

Correlation pearson(std::span<const double> x, std::span<const double> y);
Correlation spearman(std::span<const double> x, std::span<const double> y);
// Pairwise-complete over records where both metrics are present.
Correlation correlate(std::span<const MetricRecord> records, std::size_t slotA,
                      std::size_t slotB,
                      CorrelationMethod method = CorrelationMethod::Pearson);

struct CorrelationMatrix {
  std::vector<std::string> metricIds;
  std::vector<std::vector<std::optional<double>>> r;
  std::vector<std::vector<std::size_t>> n;
};

CorrelationMatrix correlationMatrix(std::span<const MetricRecord> records,
                                    CorrelationMethod method = CorrelationMethod::Pearson);

}  // namespace cellgauge
