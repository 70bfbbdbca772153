#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace cellgauge {

// Base for every error the library raises.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class LexError : public Error {
 public:
  LexError(std::size_t position, const std::string& what)
      : Error("lex error at " + std::to_string(position) + ": " + what),
        position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t position, std::vector<std::string> expected,
             const std::string& what)
      : Error("parse error at " + std::to_string(position) + ": " + what),
        position_(position),
        expected_(std::move(expected)) {}
  std::size_t position() const noexcept { return position_; }
  const std::vector<std::string>& expected() const noexcept {
    return expected_;
  }

 private:
  std::size_t position_;
  std::vector<std::string> expected_;
};

class BadColumn : public Error {
 public:
  explicit BadColumn(const std::string& letters)
      : Error("bad column: '" + letters + "'") {}
};

class NotAFormulaCell : public Error {
 public:
  using Error::Error;
};

class SchemaError : public Error {
 public:
  SchemaError(std::string path, const std::string& what)
      : Error("schema error at " + (path.empty() ? std::string("/") : path) +
              ": " + what),
        path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

class XlsxError : public Error {
 public:
  enum class Kind { NotAZip, MissingWorkbookPart, MalformedSheetXml };

  XlsxError(Kind kind, std::string part, const std::string& what)
      : Error(what + " [" + part + "]"), kind_(kind), part_(std::move(part)) {}
  Kind kind() const noexcept { return kind_; }
  const std::string& part() const noexcept { return part_; }

 private:
  Kind kind_;
  std::string part_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class EmptyCorpus : public Error {
 public:
  EmptyCorpus() : Error("empty corpus") {}
};

class NoData : public Error {
 public:
  explicit NoData(const std::string& metric)
      : Error("no data for metric " + metric) {}
};

}  // namespace cellgauge
