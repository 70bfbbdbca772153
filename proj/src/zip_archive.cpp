#include "zip_archive.hpp"

#include <zlib.h>

#include <algorithm>

#include "cellgauge/error.hpp"

namespace cellgauge::detail {

namespace {

constexpr std::uint32_t kEndOfCentralDirectory = 0x06054b50;
constexpr std::uint32_t kCentralFileHeader = 0x02014b50;
constexpr std::uint32_t kLocalFileHeader = 0x04034b50;
// Entries that inflate beyond this are treated as corrupt.
constexpr std::uint32_t kMaxEntrySize = 1u << 30;

[[noreturn]] void notAZip(const std::string& part, const std::string& what) {
  throw XlsxError(XlsxError::Kind::NotAZip, part, what);
}

std::uint16_t u16(const std::vector<std::uint8_t>& b, std::size_t at) {
  if (at + 2 > b.size()) notAZip("(archive)", "truncated archive");
  return static_cast<std::uint16_t>(b[at] | (b[at + 1] << 8));
}

std::uint32_t u32(const std::vector<std::uint8_t>& b, std::size_t at) {
  if (at + 4 > b.size()) notAZip("(archive)", "truncated archive");
  return static_cast<std::uint32_t>(b[at]) | (static_cast<std::uint32_t>(b[at + 1]) << 8) |
         (static_cast<std::uint32_t>(b[at + 2]) << 16) |
         (static_cast<std::uint32_t>(b[at + 3]) << 24);
}

}  // namespace

ZipArchive::ZipArchive(std::vector<std::uint8_t> bytes) : bytes_(std::move(bytes)) {
  const auto& b = bytes_;
  if (b.size() < 22) notAZip("(archive)", "file too small to be a zip archive");
  // The end record sits in the last 22 + 65535 bytes (trailing comment).
  std::size_t lowest = b.size() > 22 + 65535 ? b.size() - 22 - 65535 : 0;
  std::optional<std::size_t> eocd;
  for (std::size_t at = b.size() - 22 + 1; at-- > lowest;) {
    if (u32(b, at) == kEndOfCentralDirectory) {
      eocd = at;
      break;
    }
  }
  if (!eocd) notAZip("(archive)", "no end of central directory");
  std::uint16_t count = u16(b, *eocd + 10);
  std::uint32_t offset = u32(b, *eocd + 16);
  std::size_t at = offset;
  for (std::uint16_t i = 0; i < count; ++i) {
    if (u32(b, at) != kCentralFileHeader) notAZip("(archive)", "bad central directory");
    Entry e;
    e.method = u16(b, at + 10);
    e.compressedSize = u32(b, at + 20);
    e.uncompressedSize = u32(b, at + 24);
    std::uint16_t nameLen = u16(b, at + 28);
    std::uint16_t extraLen = u16(b, at + 30);
    std::uint16_t commentLen = u16(b, at + 32);
    e.localHeaderOffset = u32(b, at + 42);
    if (at + 46 + nameLen > b.size()) notAZip("(archive)", "truncated central directory");
    std::string name(reinterpret_cast<const char*>(&b[at + 46]), nameLen);
    entries_.emplace(std::move(name), e);
    at += 46 + static_cast<std::size_t>(nameLen) + extraLen + commentLen;
  }
}

std::optional<std::string> ZipArchive::read(const std::string& name) const {
  auto it = entries_.find(name);
  if (it == entries_.end()) return std::nullopt;
  const Entry& e = it->second;
  const auto& b = bytes_;
  std::size_t at = e.localHeaderOffset;
  if (u32(b, at) != kLocalFileHeader) notAZip(name, "bad local header");
  std::size_t dataStart = at + 30 + u16(b, at + 26) + u16(b, at + 28);
  if (dataStart + e.compressedSize > b.size()) notAZip(name, "entry extends past end of archive");
  const std::uint8_t* data = b.data() + dataStart;

  if (e.method == 0) return std::string(reinterpret_cast<const char*>(data), e.compressedSize);
  if (e.method != 8) notAZip(name, "unsupported compression method");
  if (e.uncompressedSize > kMaxEntrySize) notAZip(name, "entry too large");
  if (e.uncompressedSize == 0) return std::string();

  std::string out;
  out.resize(e.uncompressedSize);
  z_stream zs{};
  if (inflateInit2(&zs, -MAX_WBITS) != Z_OK) notAZip(name, "inflate init failed");
  zs.next_in = const_cast<Bytef*>(data);
  zs.avail_in = e.compressedSize;
  zs.next_out = reinterpret_cast<Bytef*>(out.data());
  zs.avail_out = static_cast<uInt>(out.size());
  int rc = inflate(&zs, Z_FINISH);
  std::size_t produced = zs.total_out;
  inflateEnd(&zs);
  if (rc != Z_STREAM_END || produced != e.uncompressedSize) notAZip(name, "corrupt deflate stream");
  return out;
}

}  // namespace cellgauge::detail
