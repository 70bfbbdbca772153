#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace cellgauge {

enum class ValueType { Number, Text, Boolean, Error };

std::string_view toString(ValueType type);

// Position of a cell in a workbook. All components are 1-based; column "A"
// is 1 and the first worksheet is sheet 1.
struct CellCoordinate {
  int sheet = 1;
  int row = 1;
  int column = 1;

  auto operator<=>(const CellCoordinate&) const = default;
};

inline constexpr int kMaxRows = 1048576;
inline constexpr int kMaxColumns = 16384;

// Bijective base-26: "A" -> 1, "Z" -> 26, "AA" -> 27. Case-insensitive.
// Throws BadColumn for empty or non-alphabetic input, or on overflow.
int columnLetterToIndex(std::string_view letters);
std::string columnIndexToLetters(int column);

// "B3" style text without sheet prefix.
std::string a1(int row, int column);

// Parses "B3" (no $ markers, no sheet) into (row, column).
bool parseA1(std::string_view text, int& row, int& column);

}  // namespace cellgauge
