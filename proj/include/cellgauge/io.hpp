#pragma once

#include <filesystem>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "cellgauge/analytics.hpp"
#include "cellgauge/metrics.hpp"
#include "cellgauge/workbook.hpp"

#include <json.hpp>

namespace cellgauge {

// SpreadsheetML (.xlsx). The workbook is named after the file stem.
// Throws XlsxError or IoError; per-cell anomalies go to `warnings`.
Workbook readXlsx(const std::filesystem::path& path, std::vector<std::string>* warnings = nullptr);
Workbook readXlsxBytes(std::vector<std::uint8_t> bytes, std::string name,
                       std::vector<std::string>* warnings = nullptr);

// JSON interchange document. Throws SchemaError with a JSON pointer.
Workbook readInterchange(const nlohmann::json& document);
nlohmann::json writeInterchange(const Workbook& workbook);
Workbook readInterchangeFile(const std::filesystem::path& path);

enum class InputFormat { Auto, Xlsx, Json };

// Picks the reader by extension unless `format` says otherwise. An empty
// interchange name falls back to the file stem. Throws IoError for unknown
// extensions.
Workbook readWorkbook(const std::filesystem::path& path, InputFormat format = InputFormat::Auto,
                      std::vector<std::string>* warnings = nullptr);

enum class ReportFormat { Csv, Json };

// Fixed-point with at most six decimals, round-half-even on the exact binary
// value, trailing zeros removed. Integers print without a decimal point.
std::string formatNumber(double value);

void writeRecords(std::span<const MetricRecord> records, ReportFormat format, std::ostream& out);
// A single record as a JSON object (CSV is header plus one row).
void writeRecord(const MetricRecord& record, ReportFormat format, std::ostream& out);
void writeSummary(const CorpusSummary& summary, ReportFormat format, std::ostream& out);
void writeHistogram(const Histogram& histogram, ReportFormat format, std::ostream& out);
void writeCorrelation(const CorrelationMatrix& matrix, ReportFormat format, std::ostream& out);

nlohmann::json recordToJson(const MetricRecord& record);
std::string csvHeader();

}  // namespace cellgauge
