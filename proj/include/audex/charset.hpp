#pragma once

#include <array>
#include <string>

namespace audex {

/// The 28 output symbols: 'a'..'z', space, hyphen — in that order.
class CharSet {
 public:
  static constexpr std::size_t kSize = 28;
  static constexpr std::size_t kSpaceIndex = 26;
  static constexpr std::size_t kHyphenIndex = 27;

  static const std::array<char, kSize>& symbols();
  static std::string as_string();  // "abcdefghijklmnopqrstuvwxyz -"

  static char char_at(std::size_t index);

  /// Index of a symbol, or -1 if it is not in the set.
  static int index_of(char c);

  static bool is_letter(std::size_t index) { return index < kSpaceIndex; }
};

}  // namespace audex
