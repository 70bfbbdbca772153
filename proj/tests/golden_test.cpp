#include <gtest/gtest.h>

#include <chrono>
#include <fstream>
#include <sstream>

#include "cellgauge/io.hpp"
#include "cellgauge/metrics.hpp"

using namespace cellgauge;
using nlohmann::json;

namespace {

json load(const std::string& path) {
  std::ifstream in(path);
  return json::parse(in);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void expectMatchesOracle(const MetricRecord& r, const json& expected) {
  EXPECT_EQ(r.sheetCount, expected["sheetCount"]);
  EXPECT_EQ(r.nonEmptyCellCount, expected["nonEmptyCells"]);
  EXPECT_EQ(r.inputCellCount, expected["inputCells"]);
  EXPECT_EQ(r.formulaCellCount, expected["formulaCells"]);
  EXPECT_EQ(r.parseFailureCount, expected["parseFailures"]);
  for (std::size_t m = 0; m < kMetricCount; ++m) {
    const auto& info = metricCatalog()[m];
    const json& want = expected["metrics"][std::string(info.id)];
    if (want.is_null()) {
      EXPECT_FALSE(r.values[m]) << info.id;
      continue;
    }
    ASSERT_TRUE(r.values[m]) << info.id;
    if (info.integral)
      EXPECT_EQ(*r.values[m], want.get<double>()) << info.id;
    else
      EXPECT_NEAR(*r.values[m], want.get<double>(), 1e-9) << info.id;
  }
}

Workbook handBuiltG1() {
  Workbook wb("g1");
  auto& in = wb.addSheet("Inputs");
  in.setLiteral(1, 1, Literal::text("Item"));
  in.setLiteral(1, 2, Literal::text("Rate"));
  in.setLiteral(2, 1, Literal::text("a"));
  in.setLiteral(2, 2, Literal::number(0.1));
  in.setLiteral(3, 1, Literal::text("b"));
  in.setLiteral(3, 2, Literal::number(0.2));
  in.setLiteral(4, 1, Literal::text("c"));
  in.setLiteral(4, 2, Literal::number(0.3));
  in.setLiteral(6, 1, Literal::text("tax"));
  in.setLiteral(6, 2, Literal::number(0.07));
  in.setFormula(2, 3, "=B2*100", ValueType::Number);
  in.setFormula(3, 3, "=B3*100", ValueType::Number);
  in.setFormula(4, 3, "=B4*100", ValueType::Number);
  in.setVisualProperty(1, 4, {"fillColor", "FFFFFF00"});

  auto& calc = wb.addSheet("Calc");
  calc.setLiteral(1, 1, Literal::text("Total"));
  calc.setFormula(2, 1, "=SUM(Inputs!B2:B4)");
  calc.setFormula(3, 1, "=IF(A2>0,SUM(Rates),0)");
  calc.setFormula(4, 1, "=A2*TaxRate");
  calc.setFormula(5, 1, "=IFERROR(A3/A4,\"n/a\")", ValueType::Number);
  calc.setFormula(6, 1, "=Bonus*2");
  calc.setFormula(7, 1, "=SUM(B1:B5)");
  calc.setFormula(8, 1, "=-2^2+Inputs!C2%");
  calc.setFormula(9, 1, "=sum(A2:A4");
  calc.setFormula(10, 1, "=(Lost+$B$1)*Calc!B2");
  calc.setLiteral(1, 2, Literal::number(5));
  calc.setLiteral(2, 2, Literal::number(6));
  calc.setFormula(1, 3, "=COUNT(B:B)");
  calc.setFormula(2, 3, "=AVERAGE(Report!A1,Inputs!B2)");

  auto& rep = wb.addSheet("Report");
  rep.setFormula(1, 1, "=Calc!A2&\" total\"", ValueType::Text);
  rep.setFormula(2, 1, "=IF(Calc!A3>1,IF(Calc!A4>1,\"hi\",\"mid\"),\"lo\")");
  rep.setFormula(3, 1, "=SUMIF(Inputs!A2:A4,\"a\",Inputs!B2:B4)");
  rep.setFormula(4, 1, "=Sum(Calc!A2,Calc!A2)+'Notes Page'!C3");
  rep.setLiteral(1, 2, Literal::boolean(true));
  rep.setLiteral(2, 2, Literal::error("#N/A"));

  auto& notes = wb.addSheet("Notes Page");
  notes.setLiteral(1, 1, Literal::text("See Report"));
  notes.setLiteral(2, 1, Literal::text("v1"));
  notes.setVisualProperty(5, 2, {"fillColor", "theme:4"});

  wb.defineName("Rates", "Inputs!$B$2:$B$4");
  wb.defineName("TaxRate", "Inputs!$B$6");
  wb.defineName("Lost", "#REF!");
  return wb;
}

}  // namespace

TEST(Golden, FixtureEqualsHandBuiltModel) {
  EXPECT_EQ(readInterchangeFile(CG_FIXTURES "/g1.json"), handBuiltG1());
}

TEST(Golden, AllMetricsMatchOracle) {
  auto start = std::chrono::steady_clock::now();
  MetricRecord r = analyzeWorkbook(readInterchangeFile(CG_FIXTURES "/g1.json"));
  auto elapsed = std::chrono::steady_clock::now() - start;
  expectMatchesOracle(r, load(CG_FIXTURES "/g1_expected.json"));
  EXPECT_LT(elapsed, std::chrono::seconds(1));
}

TEST(Golden, NarrowedConditionalSetMatchesOracle) {
  MetricsConfig cfg;
  cfg.conditionalFunctions = {"IF"};
  MetricRecord r = analyzeWorkbook(readInterchangeFile(CG_FIXTURES "/g1.json"), cfg);
  expectMatchesOracle(r, load(CG_FIXTURES "/g1_expected_if.json"));
}

TEST(Golden, CsvIsByteExact) {
  MetricRecord r = analyzeWorkbook(readInterchangeFile(CG_FIXTURES "/g1.json"));
  std::ostringstream out;
  writeRecord(r, ReportFormat::Csv, out);
  EXPECT_EQ(out.str(), slurp(CG_FIXTURES "/g1_expected.csv"));
}

TEST(Golden, DanglingNames) {
  Workbook wb = readInterchangeFile(CG_FIXTURES "/g1.json");
  DependencyGraph g = buildGraph(wb);
  EXPECT_EQ(g.danglingCount({2, 6, 1}), 1);   // =Bonus*2
  EXPECT_EQ(g.danglingCount({2, 10, 1}), 1);  // name bound to #REF!
  EXPECT_EQ(g.danglingCount({2, 3, 1}), 0);
}
