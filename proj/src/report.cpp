#include <charconv>
#include <cmath>
#include <ostream>

#include "cellgauge/error.hpp"
#include "cellgauge/io.hpp"

namespace cellgauge {

using nlohmann::json;

namespace {

std::string csvField(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string csvValue(const std::optional<double>& v) { return v ? formatNumber(*v) : std::string(); }

// JSON number carrying the same digits as formatNumber.
json jsonNumber(double v) {
  std::string text = formatNumber(v);
  if (text.find('.') == std::string::npos) {
    long long i = 0;
    auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), i);
    if (ec == std::errc() && p == text.data() + text.size()) return i;
  }
  double d = 0;
  std::from_chars(text.data(), text.data() + text.size(), d);
  return d;
}

json jsonValue(const std::optional<double>& v) { return v ? jsonNumber(*v) : json(nullptr); }

void checked(std::ostream& out) {
  if (!out) throw IoError("write failed");
}

}  // namespace

std::string formatNumber(double value) {
  if (!std::isfinite(value)) return std::isnan(value) ? "NaN" : (value > 0 ? "Inf" : "-Inf");
  char buf[400];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::fixed, 6);
  if (ec != std::errc()) return "NaN";
  std::string s(buf, end);
  while (!s.empty() && s.back() == '0') s.pop_back();
  if (!s.empty() && s.back() == '.') s.pop_back();
  if (s == "-0") s = "0";
  return s;
}

std::string csvHeader() {
  std::string h = "workbookId,sheetCount,nonEmptyCells,inputCells,formulaCells,parseFailures";
  for (const auto& info : metricCatalog()) {
    h += ',';
    h += info.id;
  }
  return h;
}

json recordToJson(const MetricRecord& r) {
  json j = json::object();
  j["workbookId"] = r.workbookId;
  j["sheetCount"] = r.sheetCount;
  j["nonEmptyCells"] = r.nonEmptyCellCount;
  j["inputCells"] = r.inputCellCount;
  j["formulaCells"] = r.formulaCellCount;
  j["parseFailures"] = r.parseFailureCount;
  for (std::size_t m = 0; m < kMetricCount; ++m)
    j[std::string(metricCatalog()[m].id)] = jsonValue(r.values[m]);
  return j;
}

namespace {

void writeCsvRow(const MetricRecord& r, std::ostream& out) {
  out << csvField(r.workbookId) << ',' << r.sheetCount << ',' << r.nonEmptyCellCount << ','
      << r.inputCellCount << ',' << r.formulaCellCount << ',' << r.parseFailureCount;
  for (const auto& v : r.values) out << ',' << csvValue(v);
  out << '\n';
}

// nlohmann sorts object keys; reports keep the column order instead.
std::string orderedRecordJson(const MetricRecord& r) {
  json j = recordToJson(r);
  std::string s = "{";
  auto put = [&](const std::string& key) {
    if (s.size() > 1) s += ',';
    s += json(key).dump() + ":" + j[key].dump();
  };
  for (const char* key : {"workbookId", "sheetCount", "nonEmptyCells", "inputCells", "formulaCells",
                          "parseFailures"})
    put(key);
  for (const auto& info : metricCatalog()) put(std::string(info.id));
  return s + "}";
}

}  // namespace

void writeRecords(std::span<const MetricRecord> records, ReportFormat format, std::ostream& out) {
  if (format == ReportFormat::Csv) {
    out << csvHeader() << '\n';
    for (const auto& r : records) writeCsvRow(r, out);
  } else {
    out << "[";
    for (std::size_t i = 0; i < records.size(); ++i)
      out << (i ? ",\n " : "\n ") << orderedRecordJson(records[i]);
    out << (records.empty() ? "]\n" : "\n]\n");
  }
  checked(out);
}

void writeRecord(const MetricRecord& record, ReportFormat format, std::ostream& out) {
  if (format == ReportFormat::Csv) {
    out << csvHeader() << '\n';
    writeCsvRow(record, out);
  } else {
    out << orderedRecordJson(record) << '\n';
  }
  checked(out);
}

void writeSummary(const CorpusSummary& s, ReportFormat format, std::ostream& out) {
  const auto& catalog = metricCatalog();
  if (format == ReportFormat::Csv) {
    out << "metric,label,n,mean\n";
    out << "spreadsheetCount,Number of spreadsheets," << s.spreadsheetCount << ','
        << s.spreadsheetCount << '\n';
    out << "ratioWithFormulas,Ratio of spreadsheets with formulas," << s.spreadsheetCount << ','
        << formatNumber(s.ratioWithFormulas) << '\n';
    for (std::size_t m = 0; m < kMetricCount; ++m)
      out << catalog[m].id << ',' << csvField(catalog[m].label) << ',' << s.present[m] << ','
          << csvValue(s.mean[m]) << '\n';
  } else {
    json rows = json::array();
    for (std::size_t m = 0; m < kMetricCount; ++m)
      rows.push_back({{"metric", catalog[m].id},
                      {"label", catalog[m].label},
                      {"n", s.present[m]},
                      {"mean", jsonValue(s.mean[m])}});
    json j = {{"spreadsheetCount", s.spreadsheetCount},
              {"ratioWithFormulas", jsonNumber(s.ratioWithFormulas)},
              {"metrics", std::move(rows)}};
    out << j.dump(1) << '\n';
  }
  checked(out);
}

void writeHistogram(const Histogram& h, ReportFormat format, std::ostream& out) {
  if (format == ReportFormat::Csv) {
    out << "metric,binLow,binHigh,count\n";
    for (std::size_t i = 0; i < h.counts.size(); ++i)
      out << h.metricId << ',' << formatNumber(h.binEdges[i]) << ','
          << formatNumber(h.binEdges[i + 1]) << ',' << h.counts[i] << '\n';
  } else {
    json edges = json::array();
    for (double e : h.binEdges) edges.push_back(jsonNumber(e));
    json j = {{"metric", h.metricId}, {"binEdges", std::move(edges)}, {"counts", h.counts}};
    out << j.dump() << '\n';
  }
  checked(out);
}

void writeCorrelation(const CorrelationMatrix& m, ReportFormat format, std::ostream& out) {
  if (format == ReportFormat::Csv) {
    out << "metric";
    for (const auto& id : m.metricIds) out << ',' << id;
    out << '\n';
    for (std::size_t i = 0; i < m.metricIds.size(); ++i) {
      out << m.metricIds[i];
      for (std::size_t k = 0; k < m.metricIds.size(); ++k) out << ',' << csvValue(m.r[i][k]);
      out << '\n';
    }
  } else {
    json r = json::array();
    for (const auto& row : m.r) {
      json jr = json::array();
      for (const auto& v : row) jr.push_back(jsonValue(v));
      r.push_back(std::move(jr));
    }
    json j = {{"metricIds", m.metricIds}, {"r", std::move(r)}, {"n", m.n}};
    out << j.dump() << '\n';
  }
  checked(out);
}

}  // namespace cellgauge
