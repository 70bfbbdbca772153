// Acceptance suite: one PASS/FAIL/SKIP line per criterion.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <sstream>
#include <unistd.h>

#include "cellgauge/analytics.hpp"
#include "cellgauge/corpus.hpp"
#include "cellgauge/dependency_graph.hpp"
#include "cellgauge/error.hpp"
#include "cellgauge/formula.hpp"
#include "cellgauge/io.hpp"
#include "cellgauge/metrics.hpp"
#include "support/generators.hpp"

using namespace cellgauge;
using nlohmann::json;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  enum { Pass, Fail, Skip } status = Pass;
  std::string detail;
};

Outcome fail(std::string why) { return {Outcome::Fail, std::move(why)}; }

double seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

std::string fixed(double v, int digits = 3) {
  std::ostringstream s;
  s.precision(digits);
  s << std::fixed << v;
  return s.str();
}

Outcome goldenWorkbook() {
  auto start = Clock::now();
  std::ifstream in(CG_FIXTURES "/g1_expected.json");
  json expected = json::parse(in);
  MetricRecord r = analyzeWorkbook(readInterchangeFile(CG_FIXTURES "/g1.json"));
  double t = seconds(start);
  if (r.sheetCount != expected["sheetCount"] || r.nonEmptyCellCount != expected["nonEmptyCells"] ||
      r.inputCellCount != expected["inputCells"] || r.formulaCellCount != expected["formulaCells"] ||
      r.parseFailureCount != expected["parseFailures"])
    return fail("cell counts differ from oracle");
  for (std::size_t m = 0; m < kMetricCount; ++m) {
    const auto& info = metricCatalog()[m];
    const json& want = expected["metrics"][std::string(info.id)];
    if (want.is_null() != !r.values[m]) return fail(std::string(info.id) + " presence differs");
    if (want.is_null()) continue;
    double w = want.get<double>(), got = *r.values[m];
    bool ok = info.integral ? got == w : std::abs(got - w) <= 1e-9;
    if (!ok) return fail(std::string(info.id) + " = " + formatNumber(got) + ", oracle " + formatNumber(w));
  }
  if (t >= 1.0) return fail("took " + fixed(t) + " s");
  return {Outcome::Pass, "22/22 metrics match oracle in " + fixed(t) + " s"};
}

Outcome parserProperties() {
  auto start = Clock::now();
  cgtest::FormulaGen gen(2024);
  for (int i = 0; i < 1000; ++i) {
    std::string f = gen.formula(6);
    try {
      Expression e = parseFormula(f);
      if (!(parseFormula(serialize(e)) == e)) return fail("round trip broke on " + f);
    } catch (const Error& e) {
      return fail("generated formula rejected: " + f + ": " + e.what());
    }
  }
  std::mt19937_64 rng(99);
  const std::string alphabet = "ABCXYZabc0123456789$:!()+-*/^&%<>=,.\"'#[]_? ";
  int rejected = 0;
  for (int i = 0; i < 100000; ++i) {
    std::string s;
    int len = static_cast<int>(rng() % 40);
    for (int k = 0; k < len; ++k)
      s += rng() % 3 ? alphabet[rng() % alphabet.size()] : static_cast<char>(rng() % 256);
    try {
      parseFormula(s);
    } catch (const LexError&) {
      ++rejected;
    } catch (const ParseError&) {
      ++rejected;
    }
  }
  Expression neg = parseFormula("-2^2");
  const auto& pow = neg.as<Operator>();
  if (pow.kind != OperatorKind::Pow || pow.operands[0].as<Operator>().kind != OperatorKind::UnaryMinus)
    return fail("-2^2 does not parse as pow(neg 2, 2)");
  Expression sum = parseFormula("1+2*3^4%");
  const auto& add = sum.as<Operator>();
  if (add.kind != OperatorKind::Add || add.operands[1].as<Operator>().kind != OperatorKind::Mul)
    return fail("additive/multiplicative precedence wrong");
  double t = seconds(start);
  if (t >= 60) return fail("took " + fixed(t) + " s");
  return {Outcome::Pass, "1000 round trips, 100000 fuzz inputs (" + std::to_string(rejected) +
                             " rejected with positioned errors), anchors ok in " + fixed(t) + " s"};
}

Outcome metricInvariants() {
  cgtest::FormulaGen gen(77, {"S1", "S2"});
  int cases = 0;
  for (int w = 0; w < 100; ++w) {
    Workbook wb("inv" + std::to_string(w));
    wb.addSheet("S1");
    wb.addSheet("S2");
    wb.defineName("Rates", "S1!$A$1:$C$3");
    for (int k = 0; k < 12; ++k) {
      wb.sheet(0).setFormula(40 + k, 1 + w % 5, "=" + gen.formula(5));
      wb.sheet(1).setLiteral(1 + k, 1, Literal::number(k));
    }
    if (w % 7 == 0) wb.sheet(0).setFormula(60, 1, "=SUM(A1");
    DependencyGraph g = buildGraph(wb);
    for (const auto& sheet : wb.sheets())
      for (const auto& [key, cell] : sheet.cells()) {
        const FormulaContent* f = cell.formula();
        if (!f || !f->parsed()) continue;
        FormulaMetrics m = measureFormula(cell.coordinate, *f->ast(), g);
        ++cases;
        if (m.astDepth < 1 || m.astDepth > m.elementCount) return fail("depth/elements: " + f->text());
        if (m.distinctFunctionCount > m.functionCount || m.functionCount > m.elementCount)
          return fail("function counts: " + f->text());
        if (m.conditionalCount > m.functionCount) return fail("conditionals: " + f->text());
        if (m.spreadingFactor < 0) return fail("negative spreading factor");
      }
    MetricRecord r = analyzeWorkbook(wb);
    for (std::size_t avg = 0; avg + 1 < kMetricCount; ++avg) {
      bool pair = avg == 0 || (avg >= 8 && avg % 2 == 0);
      if (pair && r.values[avg] && *r.values[avg] > *r.values[avg + 1])
        return fail(std::string(metricCatalog()[avg].id) + " above its max");
    }
    if (*r.values[7] > *r.values[2]) return fail("M08 > M03");
    if (*r.values[3] < 0 || *r.values[3] > 1) return fail("M04 outside [0,1]");
  }
  if (cases < 1000) return fail("only " + std::to_string(cases) + " cases");
  return {Outcome::Pass, std::to_string(cases) + " formulas, 100 workbooks, all invariants hold"};
}

Outcome spreadingOracle() {
  Workbook wb("grid");
  for (const char* s : {"G1", "G2", "G3"}) wb.addSheet(s);
  struct Case {
    CellCoordinate at;
    int sheet, r1, c1, r2, c2;
    CellCoordinate anchor;
  };
  std::vector<Case> cases;
  int row = 100;
  for (int s = 1; s <= 3; ++s)
    for (int p = 0; p < 100; ++p)
      for (int q = 0; q < 100; ++q) {
        Case c{{1, row++, 20}, s, p / 10 + 1, p % 10 + 1, q / 10 + 1, q % 10 + 1, {}};
        int a = static_cast<int>(cases.size()) % 300;
        c.anchor = {a / 100 + 1, (a % 100) / 10 + 1, a % 10 + 1};
        std::string range = "G" + std::to_string(s) + "!" + a1(c.r1, c.c1) + ":" + a1(c.r2, c.c2);
        std::string anchor = "G" + std::to_string(c.anchor.sheet) + "!" + a1(c.anchor.row, c.anchor.column);
        wb.sheet(0).setFormula(c.at.row, c.at.column, "=SUM(" + range + ")+" + anchor);
        cases.push_back(c);
      }
  DependencyGraph g = buildGraph(wb);
  for (const auto& c : cases) {
    std::vector<CellCoordinate> pts{c.anchor};
    for (int r = std::min(c.r1, c.r2); r <= std::max(c.r1, c.r2); ++r)
      for (int col = std::min(c.c1, c.c2); col <= std::max(c.c1, c.c2); ++col)
        pts.push_back({c.sheet, r, col});
    double brute = 0;
    for (std::size_t i = 0; i < pts.size(); ++i)
      for (std::size_t k = i + 1; k < pts.size(); ++k) {
        double dr = pts[i].row - pts[k].row, dc = pts[i].column - pts[k].column,
               ds = pts[i].sheet - pts[k].sheet;
        brute = std::max(brute, std::sqrt(dr * dr + dc * dc + ds * ds));
      }
    double corner = spreadingFactor(c.at, g);
    if (corner != brute)
      return fail("mismatch at row " + std::to_string(c.at.row) + ": " + formatNumber(corner) + " vs " +
                  formatNumber(brute));
  }
  return {Outcome::Pass, std::to_string(cases.size()) + " ranges (every start/end pair on 3 sheets), exact"};
}

Outcome graphIdentities() {
  for (std::uint64_t seed = 1000; seed < 1100; ++seed) {
    Workbook wb = cgtest::randomWorkbook(seed, 3, 60);
    DependencyGraph g = buildGraph(wb);
    long long lhs = 0, rhs = 0;
    std::size_t reverseEdges = 0;
    for (const auto& [f, links] : g.forward()) {
      for (std::size_t i = 0; i < links.targets.size(); ++i) {
        if (i && !(links.targets[i - 1] < links.targets[i])) return fail("duplicate or unsorted targets");
        if (g.isFormulaCell(links.targets[i])) ++lhs;
        auto refs = g.referrersOf(links.targets[i]);
        if (std::find(refs.begin(), refs.end(), f) == refs.end()) return fail("reverse misses an edge");
      }
    }
    for (const auto& [cell, refs] : g.reverse()) {
      reverseEdges += refs.size();
      if (std::adjacent_find(refs.begin(), refs.end()) != refs.end()) return fail("duplicate referrer");
    }
    for (const auto& f : g.formulaCells()) rhs += g.fanIn(f);
    if (lhs != rhs) return fail("transpose identity broken for seed " + std::to_string(seed));
    if (reverseEdges != g.edgeCount()) return fail("edge counts differ");
  }
  return {Outcome::Pass, "100 workbooks: transpose identity and deduplication hold"};
}

Outcome analyticsAnchors() {
  std::vector<double> x = {1, 4, 9, 16, 2.5}, nx;
  for (double v : x) nx.push_back(-v);
  double rxx = *pearson(x, x).r, rxn = *pearson(x, nx).r;
  if (std::abs(rxx - 1) > 1e-12 || std::abs(rxn + 1) > 1e-12) return fail("r(x,x) / r(x,-x) anchors");
  std::vector<double> a = {1, 2, 3}, b = {2, 4, 7};
  // hand oracle: sxy = 5, sxx = 2, syy = 38/3
  double hand = 5.0 / std::sqrt(2.0 * 38.0 / 3.0);
  double r = *pearson(a, b).r;
  if (std::abs(r - hand) > 5e-5) return fail("r = " + formatNumber(r) + ", hand oracle " + formatNumber(hand));
  bool statedAnchor = std::abs(r - 0.9819) <= 5e-5;

  std::mt19937_64 rng(8);
  for (int corpus = 0; corpus < 50; ++corpus) {
    std::vector<MetricRecord> rs;
    int n = 1 + static_cast<int>(rng() % 60);
    for (int i = 0; i < n; ++i) {
      MetricRecord rec;
      for (std::size_t m = 0; m < kMetricCount; ++m)
        if (rng() % 5) rec.values[m] = metricCatalog()[m].ratio ? (rng() % 1001) / 1000.0 : (rng() % 100000) / 7.0;
      rs.push_back(rec);
    }
    for (std::size_t m = 0; m < kMetricCount; ++m) {
      std::size_t present = 0;
      for (const auto& rec : rs) present += rec.values[m].has_value();
      if (!present) continue;
      for (const auto& spec : {HistogramSpec{}, HistogramSpec::automatic(7), HistogramSpec::fixed(0, 50, 9)}) {
        Histogram h = histogram(rs, m, spec);
        if (std::accumulate(h.counts.begin(), h.counts.end(), std::size_t{0}) != present)
          return fail("histogram loses values");
      }
    }
    std::vector<MetricRecord> twice = rs;
    twice.insert(twice.end(), rs.begin(), rs.end());
    CorpusSummary s1 = aggregate(rs), s2 = aggregate(twice);
    if (s1.mean != s2.mean || s1.ratioWithFormulas != s2.ratioWithFormulas)
      return fail("duplicating records moved a mean");
  }
  std::string detail = "r(x,x), r(x,-x) ok; r(1,2,3;2,4,7) = " + formatNumber(r) + " equals hand oracle " +
                       formatNumber(hand) + "; conservation and duplication invariance hold on 50 corpora";
  if (!statedAnchor) return fail(detail + "; stated anchor 0.9819 +/- 5e-5 not met");
  return {Outcome::Pass, detail};
}

fs::path scratch(const std::string& tag) {
  fs::path p = fs::temp_directory_path() / ("cellgauge-acceptance-" + tag + "-" + std::to_string(::getpid()));
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

Outcome determinism() {
  fs::path dir = scratch("det");
  for (int i = 0; i < 200; ++i) {
    fs::path sub = dir / ("d" + std::to_string(i % 7));
    fs::create_directories(sub);
    std::ofstream(sub / ("book" + std::to_string(i) + ".json"))
        << writeInterchange(cgtest::randomWorkbook(5000 + i, 2 + i % 3, 30)).dump();
  }
  auto csvFor = [&](unsigned threads) {
    CorpusOptions opt;
    opt.threads = threads;
    CorpusRun run = runCorpus(dir, opt);
    std::ostringstream out;
    writeRecords(run.records, ReportFormat::Csv, out);
    return std::make_pair(run.records.size(), out.str());
  };
  auto [n1, one] = csvFor(1);
  auto [n8, eight] = csvFor(8);
  fs::remove_all(dir);
  if (n1 != 200 || n8 != 200) return fail("expected 200 records");
  if (one != eight) return fail("1-thread and 8-thread reports differ");
  return {Outcome::Pass, "200 files, 1 vs 8 threads byte-identical (" + std::to_string(one.size()) + " bytes)"};
}

Outcome performance() {
  fs::path dir = scratch("perf");
  Workbook wb("perf");
  auto& data = wb.addSheet("Data");
  auto& calc = wb.addSheet("Calc");
  std::mt19937_64 rng(42);
  for (int r = 1; r <= 500; ++r)
    for (int c = 1; c <= 10; ++c) data.setLiteral(r, c, Literal::number(static_cast<double>(rng() % 1000)));
  for (int i = 0; i < 10000; ++i) {
    int top = 1 + static_cast<int>(rng() % 400), left = 1 + static_cast<int>(rng() % 6);
    int h = 1 + static_cast<int>(rng() % 25), w = 1 + static_cast<int>(rng() % 4);  // at most 100 cells
    std::string range = "Data!" + a1(top, left) + ":" + a1(top + h - 1, left + w - 1);
    std::string f = i % 3 == 0   ? "=IF(SUM(" + range + ")>100,AVERAGE(" + range + "),0)"
                    : i % 3 == 1 ? "=SUM(" + range + ")*Data!A1+B" + std::to_string(i / 100 + 1)
                                 : "=ROUND(SUMIF(" + range + ",\">5\")/" + std::to_string(i % 17 + 1) + ",2)";
    calc.setFormula(i / 100 + 1, i % 100 + 1, f);
  }
  fs::path file = dir / "perf.json";
  std::ofstream(file) << writeInterchange(wb).dump();

  auto start = Clock::now();
  MetricRecord r = analyzeWorkbook(readWorkbook(file));
  std::ostringstream out;
  writeRecord(r, ReportFormat::Csv, out);
  double t = seconds(start);
  fs::remove_all(dir);
  if (r.formulaCellCount != 10000) return fail("expected 10000 formulas");
  if (t >= 5) return fail("took " + fixed(t) + " s");
  return {Outcome::Pass, "10000 formulas read and analyzed in " + fixed(t) + " s"};
}

Outcome corpusSmoke() {
  const char* root = std::getenv("CELLGAUGE_EUSES_DIR");
  if (!root || !*root || !fs::is_directory(root))
    return {Outcome::Skip, "set CELLGAUGE_EUSES_DIR to a local EUSES copy to run"};
  CorpusRun run = runCorpus(root, {});
  if (run.records.empty()) return fail("no readable workbooks");
  CorpusSummary s = aggregate(run.records);
  double ratio = s.ratioWithFormulas;
  std::optional<double> fanOut = s.mean[8];
  std::string detail = std::to_string(run.records.size()) + " workbooks, ratio with formulas " +
                       fixed(ratio * 100, 1) + " %, mean fan-out " + (fanOut ? formatNumber(*fanOut) : "n/a");
  if (std::abs(ratio - 0.43) > 0.10) return fail(detail + " (ratio outside 33-53 %)");
  if (!fanOut || *fanOut < 50 || *fanOut > 500) return fail(detail + " (fan-out outside 50-500)");
  return {Outcome::Pass, detail};
}

}  // namespace

// With arguments, only the listed criterion numbers run.
int main(int argc, char** argv) {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"golden workbook G1 matches brute-force oracle", goldenWorkbook},
      {"parser round trip, fuzz totality, precedence", parserProperties},
      {"per-formula and per-workbook metric invariants", metricInvariants},
      {"spreading factor corners equal brute force", spreadingOracle},
      {"dependency graph transpose and deduplication", graphIdentities},
      {"analytics anchors, conservation, duplication", analyticsAnchors},
      {"corpus determinism across thread counts", determinism},
      {"10k-formula workbook under 5 s", performance},
      {"optional EUSES corpus smoke", corpusSmoke},
  };
  std::vector<bool> selected(criteria.size(), argc < 2);
  for (int a = 1; a < argc; ++a) {
    int n = std::atoi(argv[a]);
    if (n < 1 || n > static_cast<int>(criteria.size())) {
      std::cerr << "unknown criterion " << argv[a] << "\n";
      return 2;
    }
    selected[n - 1] = true;
  }
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (!selected[i]) continue;
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = fail(std::string("exception: ") + e.what());
    }
    const char* tag = o.status == Outcome::Pass ? "PASS" : o.status == Outcome::Skip ? "SKIP" : "FAIL";
    if (o.status == Outcome::Fail) ++failures;
    std::cout << "criterion " << i + 1 << " [" << tag << "] " << criteria[i].first << ": " << o.detail
              << std::endl;
  }
  std::cout << (failures ? "acceptance: FAILED (" + std::to_string(failures) + ")" : std::string("acceptance: OK"))
            << std::endl;
  return failures ? 1 : 0;
}
