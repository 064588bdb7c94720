#include "audex/charset.hpp"

#include "audex/error.hpp"

namespace audex {

const std::array<char, CharSet::kSize>& CharSet::symbols() {
  static const std::array<char, kSize> table = {
      'a', 'b', 'c', 'd', 'e', 'f', 'g', 'h', 'i', 'j', 'k', 'l', 'm', 'n',
      'o', 'p', 'q', 'r', 's', 't', 'u', 'v', 'w', 'x', 'y', 'z', ' ', '-'};
  return table;
}

std::string CharSet::as_string() {
  const auto& t = symbols();
  return std::string(t.begin(), t.end());
}

char CharSet::char_at(std::size_t index) {
  if (index >= kSize) {
    throw Error(ErrorCode::IndexOutOfRange,
                "character index " + std::to_string(index) + " out of [0,28)");
  }
  return symbols()[index];
}

int CharSet::index_of(char c) {
  if (c >= 'a' && c <= 'z') return c - 'a';
  if (c == ' ') return static_cast<int>(kSpaceIndex);
  if (c == '-') return static_cast<int>(kHyphenIndex);
  return -1;
}

}  // namespace audex
