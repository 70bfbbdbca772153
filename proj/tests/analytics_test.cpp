#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "cellgauge/analytics.hpp"
#include "cellgauge/error.hpp"

using namespace cellgauge;

namespace {

MetricRecord rec(std::initializer_list<std::pair<const char*, std::optional<double>>> values) {
  MetricRecord r;
  for (auto [id, v] : values) r.values[*metricIndex(id)] = v;
  return r;
}

// Pearson straight from the textbook definition.
double handPearson(const std::vector<double>& x, const std::vector<double>& y) {
  double mx = std::accumulate(x.begin(), x.end(), 0.0) / x.size();
  double my = std::accumulate(y.begin(), y.end(), 0.0) / y.size();
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace

TEST(Aggregate, RatioWithFormulas) {
  std::vector<MetricRecord> rs = {rec({{"M03", 0.0}}), rec({{"M03", 4.0}})};
  EXPECT_EQ(aggregate(rs).ratioWithFormulas, 0.5);
  EXPECT_EQ(aggregate(rs).spreadsheetCount, 2u);
}

TEST(Aggregate, AbsentValuesAreExcluded) {
  std::vector<MetricRecord> rs = {rec({{"M01", 1.0}}), rec({{"M01", 2.0}}), rec({{"M01", std::nullopt}})};
  CorpusSummary s = aggregate(rs);
  EXPECT_EQ(s.mean[0], 1.5);
  EXPECT_EQ(s.present[0], 2u);
  EXPECT_FALSE(s.mean[1]);
}

TEST(Aggregate, EmptyCorpusThrows) { EXPECT_THROW(aggregate({}), EmptyCorpus); }

TEST(Aggregate, DuplicationInvariance) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0, 1000);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<MetricRecord> rs;
    for (int i = 0; i < 37; ++i) rs.push_back(rec({{"M09", u(rng)}, {"M15", u(rng) / 7}}));
    std::vector<MetricRecord> twice = rs;
    twice.insert(twice.end(), rs.begin(), rs.end());
    CorpusSummary a = aggregate(rs), b = aggregate(twice);
    EXPECT_EQ(a.mean, b.mean);
  }
}

TEST(Histogram, EdgeRule) {
  std::vector<double> v = {0.0, 0.049, 0.051};
  Histogram h = histogram(v, "M04", 0, 1, 20);
  ASSERT_EQ(h.counts.size(), 20u);
  EXPECT_EQ(h.counts[0], 2u);
  EXPECT_EQ(h.counts[1], 1u);
  EXPECT_EQ(h.binEdges.size(), 21u);
}

TEST(Histogram, InteriorEdgeGoesUpAndLastBinIsClosed) {
  std::vector<double> v = {0.5, 1.0, 0.0};
  Histogram h = histogram(v, "M04", 0, 1, 4);
  EXPECT_EQ(h.counts, (std::vector<std::size_t>{1, 0, 1, 1}));
}

TEST(Histogram, RatioDefaultAndConservation) {
  std::vector<MetricRecord> rs;
  for (int i = 0; i < 40; ++i) rs.push_back(rec({{"M04", i / 39.0}, {"M09", i * 3.5}}));
  rs.push_back(rec({{"M04", std::nullopt}}));
  Histogram ratio = histogram(rs, *metricIndex("M04"));
  EXPECT_EQ(ratio.counts.size(), 20u);
  EXPECT_EQ(ratio.binEdges.front(), 0.0);
  EXPECT_EQ(ratio.binEdges.back(), 1.0);
  EXPECT_EQ(std::accumulate(ratio.counts.begin(), ratio.counts.end(), std::size_t{0}), 40u);
  Histogram fan = histogram(rs, *metricIndex("M09"), HistogramSpec::automatic(7));
  EXPECT_EQ(std::accumulate(fan.counts.begin(), fan.counts.end(), std::size_t{0}), 40u);
  EXPECT_THROW(histogram(rs, *metricIndex("M10")), NoData);
}

TEST(Correlation, Anchors) {
  std::vector<double> x = {1, 2, 3, 5, 8}, neg = {-1, -2, -3, -5, -8};
  EXPECT_NEAR(*pearson(x, x).r, 1.0, 1e-12);
  EXPECT_NEAR(*pearson(x, neg).r, -1.0, 1e-12);
  std::vector<double> a = {1, 2, 3}, b = {2, 4, 7};
  EXPECT_NEAR(*pearson(a, b).r, handPearson(a, b), 1e-12);
  EXPECT_NEAR(*pearson(a, b).r, 5.0 / std::sqrt(2.0 * 38.0 / 3.0), 1e-12);
}

TEST(Correlation, DegenerateIsAbsent) {
  std::vector<double> one = {1}, flat = {3, 3, 3}, x = {1, 2, 3};
  EXPECT_FALSE(pearson(one, one).r);
  EXPECT_FALSE(pearson(flat, x).r);
  EXPECT_EQ(pearson(flat, x).n, 3u);
}

TEST(Correlation, PairwiseCompleteAndSpearman) {
  std::vector<MetricRecord> rs = {
      rec({{"M01", 1.0}, {"M02", 1.0}}), rec({{"M01", 2.0}, {"M02", 4.0}}),
      rec({{"M01", 3.0}, {"M02", 9.0}}), rec({{"M01", std::nullopt}, {"M02", 100.0}})};
  Correlation c = correlate(rs, 0, 1);
  EXPECT_EQ(c.n, 3u);
  Correlation s = correlate(rs, 0, 1, CorrelationMethod::Spearman);
  EXPECT_NEAR(*s.r, 1.0, 1e-12);
  std::vector<double> tied = {1, 2, 2, 3}, y = {1, 2, 3, 4};
  EXPECT_NEAR(*spearman(tied, y).r, handPearson({1, 2.5, 2.5, 4}, {1, 2, 3, 4}), 1e-12);

  CorrelationMatrix m = correlationMatrix(rs);
  ASSERT_EQ(m.metricIds.size(), kMetricCount);
  EXPECT_EQ(m.r[0][0], 1.0);
  EXPECT_EQ(m.r[0][1], m.r[1][0]);
  EXPECT_FALSE(m.r[5][5]);
}
