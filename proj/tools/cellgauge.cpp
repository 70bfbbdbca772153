// cellgauge: spreadsheet complexity metrics for single workbooks and corpora.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "cellgauge/analytics.hpp"
#include "cellgauge/corpus.hpp"
#include "cellgauge/error.hpp"
#include "cellgauge/io.hpp"
#include "cellgauge/metrics.hpp"

namespace {

using namespace cellgauge;
namespace fs = std::filesystem;

enum Exit { kOk = 0, kInternal = 1, kBadInput = 2, kBadArgs = 3 };

struct RunConfig {
  std::string command;
  std::string input;
  std::string out;
  std::string format = "csv";
  std::string inputFormat = "auto";
  std::string conditionalFunctions;
  bool quiet = false;
  // corpus only
  bool summary = false;
  std::string histogramMetric;
  int bins = 0;
  std::string range;
  bool correlate = false;
  std::string correlationMethod = "pearson";
  int threads = 0;
};

struct BadArguments : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Resolved, validated form of RunConfig.
struct Plan {
  ReportFormat format = ReportFormat::Csv;
  InputFormat inputFormat = InputFormat::Auto;
  MetricsConfig metrics;
  std::optional<std::size_t> histogramSlot;
  HistogramSpec histogram;
  CorrelationMethod method = CorrelationMethod::Pearson;
  unsigned threads = 0;
};

std::string upper(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

Plan validate(const RunConfig& cfg) {
  Plan plan;
  plan.format = cfg.format == "json" ? ReportFormat::Json : ReportFormat::Csv;
  if (cfg.inputFormat == "xlsx")
    plan.inputFormat = InputFormat::Xlsx;
  else if (cfg.inputFormat == "json")
    plan.inputFormat = InputFormat::Json;

  if (!cfg.conditionalFunctions.empty()) {
    plan.metrics.conditionalFunctions.clear();
    std::stringstream ss(cfg.conditionalFunctions);
    std::string name;
    while (std::getline(ss, name, ',')) {
      auto b = name.find_first_not_of(" \t");
      auto e = name.find_last_not_of(" \t");
      if (b == std::string::npos) throw BadArguments("empty name in --conditional-functions");
      plan.metrics.conditionalFunctions.insert(upper(name.substr(b, e - b + 1)));
    }
  }

  if (!cfg.histogramMetric.empty()) {
    plan.histogramSlot = metricIndex(cfg.histogramMetric);
    if (!plan.histogramSlot) throw BadArguments("unknown metric: " + cfg.histogramMetric);
  }
  if (cfg.bins < 0) throw BadArguments("--bins must be positive");
  if (cfg.bins > 0) plan.histogram.bins = cfg.bins;
  if (!cfg.range.empty()) {
    auto comma = cfg.range.find(',');
    if (comma == std::string::npos) throw BadArguments("--range expects a,b");
    try {
      std::size_t used = 0;
      std::string lo = cfg.range.substr(0, comma), hi = cfg.range.substr(comma + 1);
      plan.histogram.low = std::stod(lo, &used);
      if (used != lo.size()) throw std::invalid_argument(lo);
      plan.histogram.high = std::stod(hi, &used);
      if (used != hi.size()) throw std::invalid_argument(hi);
    } catch (const std::logic_error&) {
      throw BadArguments("--range expects two numbers a,b");
    }
    if (!(*plan.histogram.low < *plan.histogram.high))
      throw BadArguments("--range needs a < b");
  }
  plan.method =
      cfg.correlationMethod == "spearman" ? CorrelationMethod::Spearman : CorrelationMethod::Pearson;

  if (cfg.threads < 0) throw BadArguments("--threads must be positive");
  plan.threads = static_cast<unsigned>(cfg.threads);
  if (plan.threads == 0) {
    if (const char* env = std::getenv("CELLGAUGE_THREADS"); env && *env) {
      char* end = nullptr;
      long n = std::strtol(env, &end, 10);
      if (*end != '\0' || n < 1 || n > 1024) throw BadArguments("CELLGAUGE_THREADS must be 1..1024");
      plan.threads = static_cast<unsigned>(n);
    }
  }
  return plan;
}

std::string extension(ReportFormat f) { return f == ReportFormat::Json ? ".json" : ".csv"; }

// Writes through `emit` to `path`, or to stdout when `path` is empty.
template <typename Emit>
void deliver(const std::string& path, Emit&& emit) {
  if (path.empty()) {
    emit(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  emit(out);
}

std::string sibling(const std::string& out, const std::string& tag, ReportFormat f) {
  if (out.empty()) return {};
  return out + "." + tag + extension(f);
}

int cmdAnalyze(const RunConfig& cfg, const Plan& plan) {
  Workbook wb;
  std::vector<std::string> warnings;
  try {
    wb = readWorkbook(cfg.input, plan.inputFormat, &warnings);
  } catch (const Error& e) {
    std::cerr << "cellgauge: " << cfg.input << ": " << e.what() << '\n';
    return kBadInput;
  }
  if (!cfg.quiet)
    for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
  MetricRecord record = analyzeWorkbook(wb, plan.metrics);
  deliver(cfg.out, [&](std::ostream& os) { writeRecord(record, plan.format, os); });
  return kOk;
}

int cmdCorpus(const RunConfig& cfg, const Plan& plan) {
  if (!fs::exists(cfg.input)) {
    std::cerr << "cellgauge: " << cfg.input << ": no such file or directory\n";
    return kBadInput;
  }
  CorpusOptions options;
  options.inputFormat = plan.inputFormat;
  options.metrics = plan.metrics;
  options.threads = plan.threads;
  CorpusRun run = runCorpus(cfg.input, options);

  if (!cfg.quiet) {
    for (const auto& w : run.warnings) std::cerr << "warning: " << w << '\n';
    for (const auto& s : run.skipped) std::cerr << "skipped (unsupported format): " << s.string() << '\n';
    for (const auto& f : run.failures)
      std::cerr << "unreadable: " << f.path.string() << ": " << f.reason << '\n';
  }
  std::cerr << "cellgauge: " << run.records.size() << " analyzed, " << run.failures.size()
            << " unreadable, " << run.skipped.size() << " skipped\n";
  if (run.records.empty()) return kBadInput;

  deliver(cfg.out, [&](std::ostream& os) { writeRecords(run.records, plan.format, os); });
  if (cfg.summary) {
    CorpusSummary summary = aggregate(run.records);
    deliver(sibling(cfg.out, "summary", plan.format),
            [&](std::ostream& os) { writeSummary(summary, plan.format, os); });
  }
  if (plan.histogramSlot) {
    try {
      Histogram h = histogram(run.records, *plan.histogramSlot, plan.histogram);
      deliver(sibling(cfg.out, "histogram-" + h.metricId, plan.format),
              [&](std::ostream& os) { writeHistogram(h, plan.format, os); });
    } catch (const NoData& e) {
      std::cerr << "cellgauge: " << e.what() << '\n';
    }
  }
  if (cfg.correlate) {
    CorrelationMatrix m = correlationMatrix(run.records, plan.method);
    deliver(sibling(cfg.out, "correlation", plan.format),
            [&](std::ostream& os) { writeCorrelation(m, plan.format, os); });
  }
  return kOk;
}

void commonOptions(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--out,-o", cfg.out, "Write the report here instead of stdout");
  cmd->add_option("--format,-f", cfg.format, "Report format")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--input-format", cfg.inputFormat, "Override extension-based detection")
      ->check(CLI::IsMember({"auto", "xlsx", "json"}));
  cmd->add_option("--conditional-functions", cfg.conditionalFunctions,
                  "Comma-separated function names counted as conditionals");
  cmd->add_flag("--quiet,-q", cfg.quiet, "Suppress warnings");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spreadsheet complexity metrics"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto* analyze = app.add_subcommand("analyze", "Compute metrics for one workbook");
  analyze->add_option("file", cfg.input, "Workbook (.xlsx or interchange .json)")->required();
  commonOptions(analyze, cfg);

  auto* corpus = app.add_subcommand("corpus", "Compute metrics for every workbook below a directory");
  corpus->add_option("dir", cfg.input, "Corpus directory")->required();
  commonOptions(corpus, cfg);
  corpus->add_flag("--summary", cfg.summary, "Emit per-metric corpus means");
  corpus->add_option("--histogram", cfg.histogramMetric, "Emit a histogram of this metric (e.g. M04)");
  corpus->add_option("--bins", cfg.bins, "Histogram bin count");
  corpus->add_option("--range", cfg.range, "Histogram range a,b");
  corpus->add_flag("--correlate", cfg.correlate, "Emit the pairwise metric correlation matrix");
  corpus->add_option("--correlation-method", cfg.correlationMethod, "pearson or spearman")
      ->check(CLI::IsMember({"pearson", "spearman"}));
  corpus->add_option("--threads,-j", cfg.threads, "Worker threads (default: all cores)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kBadArgs;
  }

  try {
    Plan plan = validate(cfg);
    if (analyze->parsed()) return cmdAnalyze(cfg, plan);
    return cmdCorpus(cfg, plan);
  } catch (const BadArguments& e) {
    std::cerr << "cellgauge: " << e.what() << '\n';
    return kBadArgs;
  } catch (const IoError& e) {
    std::cerr << "cellgauge: " << e.what() << '\n';
    return kBadInput;
  } catch (const std::exception& e) {
    std::cerr << "cellgauge: internal error: " << e.what() << '\n';
    return kInternal;
  }
}
