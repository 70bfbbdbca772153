#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cellgauge/io.hpp"
#include "support/generators.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out;
};

Result run(const std::string& args, const std::string& env = "") {
  std::string cmd = env + " " CG_CLI " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  std::string out;
  char buf[4096];
  while (std::size_t n = fread(buf, 1, sizeof buf, p)) out.append(buf, n);
  int status = pclose(p);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class CliCorpus : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("cellgauge-cli-" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_ / "sub");
  }
  void TearDown() override { fs::remove_all(dir_); }
  void write(const fs::path& rel, const std::string& text) {
    std::ofstream(dir_ / rel, std::ios::binary) << text;
  }
  fs::path dir_;
};

}  // namespace

TEST(Cli, AnalyzeJsonMatchesGolden) {
  Result r = run("analyze " CG_FIXTURES "/g1.json --format json");
  ASSERT_EQ(r.code, 0);
  json j = json::parse(r.out);
  EXPECT_EQ(j["workbookId"], "g1");
  EXPECT_EQ(j["M03"], 18);
  EXPECT_EQ(j["M08"], 14);
}

TEST(Cli, AnalyzeCsvIsGoldenFixture) {
  Result r = run("analyze " CG_FIXTURES "/g1.json");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out, slurp(CG_FIXTURES "/g1_expected.csv"));
}

TEST(Cli, ConditionalOverride) {
  Result r = run("analyze " CG_FIXTURES "/g1.json --format json --conditional-functions if");
  ASSERT_EQ(r.code, 0);
  json j = json::parse(r.out);
  EXPECT_EQ(j["M14"], 2);
  EXPECT_DOUBLE_EQ(j["M13"].get<double>(), 0.176471);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run("analyze /nonexistent/missing.xlsx").code, 2);
  EXPECT_EQ(run("analyze " CG_FIXTURES "/g1.json --format xml").code, 3);
  EXPECT_EQ(run("").code, 3);
  EXPECT_EQ(run("frobnicate").code, 3);
  EXPECT_EQ(run("corpus " CG_FIXTURES " --histogram M99").code, 3);
  EXPECT_EQ(run("corpus " CG_FIXTURES " --range 1,0").code, 3);
  EXPECT_EQ(run("corpus " CG_FIXTURES, "CELLGAUGE_THREADS=zero").code, 3);
  EXPECT_EQ(run("corpus /nonexistent/dir").code, 2);
  EXPECT_EQ(run("--help").code, 0);
}

TEST_F(CliCorpus, CorruptFileIsSkippedNotFatal) {
  cellgauge::Workbook a = cgtest::randomWorkbook(1), b = cgtest::randomWorkbook(2);
  write("a.json", cellgauge::writeInterchange(a).dump());
  write("sub/b.json", cellgauge::writeInterchange(b).dump());
  write("broken.xlsx", "PK\x03\x04 definitely not a zip");
  write("old.xls", "binary");
  Result r = run("corpus " + dir_.string());
  ASSERT_EQ(r.code, 0);
  std::istringstream lines(r.out);
  std::string header, first, second, extra;
  std::getline(lines, header);
  std::getline(lines, first);
  std::getline(lines, second);
  EXPECT_FALSE(std::getline(lines, extra));
  EXPECT_EQ(first.rfind("a.json,", 0), 0u);
  EXPECT_EQ(second.rfind("sub/b.json,", 0), 0u);
}

TEST_F(CliCorpus, NothingReadableExitsTwo) {
  write("broken.xlsx", "nope");
  EXPECT_EQ(run("corpus " + dir_.string()).code, 2);
}

TEST_F(CliCorpus, ArtifactsAndPlantedCorrelation) {
  for (int i = 0; i < 12; ++i) {
    cellgauge::Workbook wb("w" + std::to_string(i));
    auto& s = wb.addSheet("S");
    for (int k = 0; k <= i; ++k) s.setFormula(k + 1, 2, "=A" + std::to_string(k + 1) + "*2");
    write("w" + std::to_string(100 + i) + ".json", cellgauge::writeInterchange(wb).dump());
  }
  fs::path out = dir_ / "report.csv";
  Result r = run("corpus " + dir_.string() + " --out " + out.string() +
              " --summary --correlate --histogram M03 --bins 4");
  ASSERT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
  std::string report = slurp(out);
  EXPECT_EQ(std::count(report.begin(), report.end(), '\n'), 13);
  EXPECT_NE(slurp(dir_ / "report.csv.summary.csv").find("ratioWithFormulas"), std::string::npos);
  std::string hist = slurp(dir_ / "report.csv.histogram-M03.csv");
  EXPECT_EQ(hist.rfind("metric,binLow,binHigh,count\nM03,1,3.75,3\n", 0), 0u);

  // M03 and M05 grow in lockstep: one formula per input
  Result j = run("corpus " + dir_.string() + " --correlate --format json");
  ASSERT_EQ(j.code, 0);
  std::string text = j.out;
  std::size_t split = text.find("\n]\n");
  json corr = json::parse(text.substr(split + 3));
  EXPECT_EQ(corr["r"][2][4], 1);
}

TEST_F(CliCorpus, ThreadCountDoesNotChangeOutput) {
  for (int i = 0; i < 20; ++i)
    write("f" + std::to_string(i) + ".json", cellgauge::writeInterchange(cgtest::randomWorkbook(i + 50)).dump());
  Result one = run("corpus " + dir_.string() + " --threads 1");
  Result many = run("corpus " + dir_.string(), "CELLGAUGE_THREADS=4");
  ASSERT_EQ(one.code, 0);
  EXPECT_EQ(one.out, many.out);
}
