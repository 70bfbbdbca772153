#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace cellgauge::detail {

// Read-only view of a ZIP archive held in memory. Supports stored and
// deflated entries, which is all SpreadsheetML packages use.
class ZipArchive {
 public:
  // Throws XlsxError(NotAZip) when no central directory is found.
  explicit ZipArchive(std::vector<std::uint8_t> bytes);

  bool contains(const std::string& name) const { return entries_.count(name) > 0; }
  // Throws XlsxError(NotAZip) on a corrupt entry.
  std::optional<std::string> read(const std::string& name) const;

 private:
  struct Entry {
    std::uint16_t method = 0;
    std::uint32_t compressedSize = 0;
    std::uint32_t uncompressedSize = 0;
    std::uint32_t localHeaderOffset = 0;
  };

  std::vector<std::uint8_t> bytes_;
  std::map<std::string, Entry> entries_;
};

}  // namespace cellgauge::detail
