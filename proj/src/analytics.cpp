#include "cellgauge/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cellgauge/error.hpp"

namespace cellgauge {

namespace {

// Correctly rounded sum of finite doubles (Shewchuk's exact partials). The
// result depends only on the multiset of inputs, so repeating every input k
// times yields exactly k times the sum for k a power of two.
double exactSum(std::span<const double> values) {
  std::vector<double> partials;
  for (double x : values) {
    std::size_t i = 0;
    for (double y : partials) {
      if (std::fabs(x) < std::fabs(y)) std::swap(x, y);
      double hi = x + y;
      double lo = y - (hi - x);
      if (lo != 0.0) partials[i++] = lo;
      x = hi;
    }
    partials.resize(i);
    partials.push_back(x);
  }
  if (partials.empty()) return 0.0;
  // Round the partials (largest last) to nearest, with the half-way fix-up.
  std::size_t n = partials.size();
  double hi = partials[--n];
  double lo = 0.0;
  while (n > 0) {
    double x = hi;
    double y = partials[--n];
    hi = x + y;
    double yr = hi - x;
    lo = y - yr;
    if (lo != 0.0) break;
  }
  if (n > 0 && ((lo < 0.0 && partials[n - 1] < 0.0) || (lo > 0.0 && partials[n - 1] > 0.0))) {
    double y = lo * 2.0;
    double x = hi + y;
    double yr = x - hi;
    if (y == yr) hi = x;
  }
  return hi;
}

}  // namespace

CorpusSummary aggregate(std::span<const MetricRecord> records) {
  if (records.empty()) throw EmptyCorpus();
  CorpusSummary s;
  s.spreadsheetCount = records.size();
  std::size_t withFormulas = 0;
  std::array<std::vector<double>, kMetricCount> values;
  for (const auto& rec : records) {
    if (rec.values[2].value_or(0.0) > 0) ++withFormulas;  // M03
    for (std::size_t m = 0; m < kMetricCount; ++m)
      if (rec.values[m]) values[m].push_back(*rec.values[m]);
  }
  s.ratioWithFormulas = static_cast<double>(withFormulas) / static_cast<double>(records.size());
  for (std::size_t m = 0; m < kMetricCount; ++m) {
    s.present[m] = values[m].size();
    if (s.present[m] > 0)
      s.mean[m] = exactSum(values[m]) / static_cast<double>(s.present[m]);
  }
  return s;
}

Histogram histogram(std::span<const double> values, const std::string& metricId,
                    double low, double high, int bins) {
  if (values.empty()) throw NoData(metricId);
  if (bins < 1) throw Error("histogram needs at least one bin");
  if (!(low < high)) throw Error("histogram range must be ascending");
  Histogram h;
  h.metricId = metricId;
  h.binEdges.resize(static_cast<std::size_t>(bins) + 1);
  for (int i = 0; i <= bins; ++i)
    h.binEdges[static_cast<std::size_t>(i)] = low + (high - low) * i / bins;
  h.binEdges.back() = high;
  h.counts.assign(static_cast<std::size_t>(bins), 0);
  for (double v : values) {
    // first edge strictly greater than v, minus one: interior edges go up
    auto it = std::upper_bound(h.binEdges.begin(), h.binEdges.end(), v);
    auto bin = static_cast<long>(it - h.binEdges.begin()) - 1;
    bin = std::clamp(bin, 0L, static_cast<long>(bins) - 1);
    ++h.counts[static_cast<std::size_t>(bin)];
  }
  return h;
}

Histogram histogram(std::span<const MetricRecord> records, std::size_t metricSlot,
                    const HistogramSpec& spec) {
  const MetricInfo& info = metricCatalog().at(metricSlot);
  std::vector<double> values;
  for (const auto& rec : records)
    if (rec.values[metricSlot]) values.push_back(*rec.values[metricSlot]);
  if (values.empty()) throw NoData(std::string(info.id));

  int bins = spec.bins.value_or(20);
  double low, high;
  if (spec.low && spec.high) {
    low = *spec.low;
    high = *spec.high;
  } else if (info.ratio) {
    low = 0.0;
    high = 1.0;
  } else {
    auto [mn, mx] = std::minmax_element(values.begin(), values.end());
    low = *mn;
    high = *mx;
    if (!(low < high)) {
      // single observed value: center it in a unit-wide range
      low -= 0.5;
      high += 0.5;
    }
  }
  return histogram(values, std::string(info.id), low, high, bins);
}

Correlation pearson(std::span<const double> x, std::span<const double> y) {
  Correlation c;
  c.n = std::min(x.size(), y.size());
  if (c.n < 2) return c;
  double n = static_cast<double>(c.n);
  double mx = std::accumulate(x.begin(), x.begin() + c.n, 0.0) / n;
  double my = std::accumulate(y.begin(), y.begin() + c.n, 0.0) / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < c.n; ++i) {
    double dx = x[i] - mx;
    double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) return c;
  c.r = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
  return c;
}

namespace {

// Average ranks, ties sharing the mean of their positions.
std::vector<double> ranks(std::span<const double> v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    double rank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) out[order[k]] = rank;
    i = j + 1;
  }
  return out;
}

}  // namespace

Correlation spearman(std::span<const double> x, std::span<const double> y) {
  std::size_t n = std::min(x.size(), y.size());
  auto rx = ranks(x.first(n));
  auto ry = ranks(y.first(n));
  return pearson(rx, ry);
}

Correlation correlate(std::span<const MetricRecord> records, std::size_t slotA,
                      std::size_t slotB, CorrelationMethod method) {
  std::vector<double> xs, ys;
  for (const auto& rec : records) {
    if (!rec.values[slotA] || !rec.values[slotB]) continue;
    xs.push_back(*rec.values[slotA]);
    ys.push_back(*rec.values[slotB]);
  }
  return method == CorrelationMethod::Pearson ? pearson(xs, ys) : spearman(xs, ys);
}

CorrelationMatrix correlationMatrix(std::span<const MetricRecord> records,
                                    CorrelationMethod method) {
  CorrelationMatrix m;
  for (const auto& info : metricCatalog()) m.metricIds.emplace_back(info.id);
  m.r.assign(kMetricCount, std::vector<std::optional<double>>(kMetricCount));
  m.n.assign(kMetricCount, std::vector<std::size_t>(kMetricCount, 0));
  for (std::size_t a = 0; a < kMetricCount; ++a) {
    for (std::size_t b = a; b < kMetricCount; ++b) {
      Correlation c = correlate(records, a, b, method);
      if (a == b && c.r) c.r = 1.0;
      m.r[a][b] = m.r[b][a] = c.r;
      m.n[a][b] = m.n[b][a] = c.n;
    }
  }
  return m;
}

}  // namespace cellgauge
