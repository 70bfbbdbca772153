#include "cellgauge/corpus.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <optional>
#include <thread>

#include "cellgauge/error.hpp"

namespace cellgauge {

namespace fs = std::filesystem;

namespace {

std::string lowerExtension(const fs::path& p) {
  std::string ext = p.extension().string();
  for (auto& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return ext;
}

struct Outcome {
  std::optional<MetricRecord> record;
  std::string error;
  std::vector<std::string> warnings;
};

}  // namespace

std::vector<fs::path> scanCorpus(const fs::path& root, InputFormat format,
                                 std::vector<fs::path>* skipped) {
  std::vector<fs::path> files;
  std::vector<fs::path> unsupported;
  if (fs::is_regular_file(root)) {
    files.push_back(root);
    return files;
  }
  for (auto it = fs::recursive_directory_iterator(
           root, fs::directory_options::skip_permission_denied);
       it != fs::recursive_directory_iterator(); ++it) {
    if (!it->is_regular_file()) continue;
    const fs::path& p = it->path();
    std::string ext = lowerExtension(p);
    bool wanted = false;
    switch (format) {
      case InputFormat::Auto:
        wanted = ext == ".xlsx" || ext == ".xlsm" || ext == ".json";
        break;
      case InputFormat::Xlsx:
        wanted = ext == ".xlsx" || ext == ".xlsm";
        break;
      case InputFormat::Json:
        wanted = ext == ".json";
        break;
    }
    if (wanted)
      files.push_back(p);
    else if (ext == ".xls" || ext == ".ods" || ext == ".xlsb")
      unsupported.push_back(p);
  }
  std::sort(files.begin(), files.end());
  std::sort(unsupported.begin(), unsupported.end());
  if (skipped) *skipped = std::move(unsupported);
  return files;
}

CorpusRun runCorpus(const fs::path& root, const CorpusOptions& options) {
  CorpusRun run;
  std::vector<fs::path> files = scanCorpus(root, options.inputFormat, &run.skipped);
  std::vector<Outcome> outcomes(files.size());

  unsigned threads = options.threads ? options.threads : std::thread::hardware_concurrency();
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(files.size())));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < files.size(); i = next++) {
      Outcome& out = outcomes[i];
      try {
        Workbook wb = readWorkbook(files[i], options.inputFormat, &out.warnings);
        fs::path rel = fs::is_regular_file(root) ? files[i].filename()
                                                 : files[i].lexically_relative(root);
        wb.setName(rel.generic_string());
        out.record = analyzeWorkbook(wb, options.metrics);
      } catch (const std::exception& e) {
        out.error = e.what();
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  for (std::size_t i = 0; i < files.size(); ++i) {
    Outcome& out = outcomes[i];
    for (auto& w : out.warnings) run.warnings.push_back(files[i].string() + ": " + std::move(w));
    if (out.record)
      run.records.push_back(std::move(*out.record));
    else
      run.failures.push_back({files[i], std::move(out.error)});
  }
  return run;
}

}  // namespace cellgauge
