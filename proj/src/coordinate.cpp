#include "cellgauge/coordinate.hpp"

#include <cctype>
#include <limits>

#include "cellgauge/error.hpp"

namespace cellgauge {

std::string_view toString(ValueType type) {
  switch (type) {
    case ValueType::Number:
      return "number";
    case ValueType::Text:
      return "text";
    case ValueType::Boolean:
      return "boolean";
    case ValueType::Error:
      return "error";
  }
  return "number";
}

int columnLetterToIndex(std::string_view letters) {
  if (letters.empty()) throw BadColumn(std::string(letters));
  long long value = 0;
  for (char c : letters) {
    if (!std::isalpha(static_cast<unsigned char>(c)) ||
        static_cast<unsigned char>(c) > 127)
      throw BadColumn(std::string(letters));
    value = value * 26 + (std::toupper(static_cast<unsigned char>(c)) - 'A' + 1);
    if (value > std::numeric_limits<int>::max())
      throw BadColumn(std::string(letters));
  }
  return static_cast<int>(value);
}

std::string columnIndexToLetters(int column) {
  std::string out;
  while (column > 0) {
    int rem = (column - 1) % 26;
    out.insert(out.begin(), static_cast<char>('A' + rem));
    column = (column - 1) / 26;
  }
  return out;
}

std::string a1(int row, int column) {
  return columnIndexToLetters(column) + std::to_string(row);
}

bool parseA1(std::string_view text, int& row, int& column) {
  std::size_t i = 0;
  while (i < text.size() && std::isalpha(static_cast<unsigned char>(text[i])))
    ++i;
  if (i == 0 || i > 3 || i == text.size()) return false;
  std::size_t j = i;
  long long r = 0;
  for (; j < text.size(); ++j) {
    if (!std::isdigit(static_cast<unsigned char>(text[j]))) return false;
    r = r * 10 + (text[j] - '0');
    if (r > kMaxRows) return false;
  }
  int c = columnLetterToIndex(text.substr(0, i));
  if (r < 1 || c > kMaxColumns) return false;
  row = static_cast<int>(r);
  column = c;
  return true;
}

}  // namespace cellgauge
