#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <string_view>

#include "error.hpp"

namespace codemix {

// Binary task labels: not offensive / offensive.
enum class Label : unsigned char { NOT = 0, OFF = 1 };

inline constexpr std::array<Label, 2> kLabels{Label::NOT, Label::OFF};
inline constexpr std::size_t kNumLabels = kLabels.size();

constexpr std::size_t label_index(Label label) noexcept {
  return static_cast<std::size_t>(label);
}

constexpr std::string_view to_string(Label label) noexcept {
  return label == Label::NOT ? "NOT" : "OFF";
}

constexpr Label other(Label label) noexcept {
  return label == Label::NOT ? Label::OFF : Label::NOT;
}

inline Label parse_label(std::string_view text) {
  if (text == "NOT") return Label::NOT;
  if (text == "OFF") return Label::OFF;
  throw DataError("unknown label '" + std::string(text) + "' (expected NOT or OFF)");
}

}  // namespace codemix
