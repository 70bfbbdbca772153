#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "cellgauge/io.hpp"
#include "cellgauge/metrics.hpp"

namespace cellgauge {

struct CorpusOptions {
  InputFormat inputFormat = InputFormat::Auto;
  MetricsConfig metrics;
  unsigned threads = 0;  // 0 = hardware concurrency
};

struct CorpusFailure {
  std::filesystem::path path;
  std::string reason;
};

struct CorpusRun {
  std::vector<MetricRecord> records;  // sorted by path
  std::vector<CorpusFailure> failures;
  std::vector<std::filesystem::path> skipped;  // .xls / .ods and friends
  std::vector<std::string> warnings;
};

// Every regular file below `root` that the reader understands, sorted.
// Unsupported spreadsheet formats are returned through `skipped`.
std::vector<std::filesystem::path> scanCorpus(const std::filesystem::path& root,
                                              InputFormat format,
                                              std::vector<std::filesystem::path>* skipped = nullptr);

// Analyzes every workbook below `root`, one workbook per task. The record id
// is the path relative to `root`. Output order does not depend on `threads`.
CorpusRun runCorpus(const std::filesystem::path& root, const CorpusOptions& options);

}  // namespace cellgauge
