#pragma once

#include <array>
#include <cstdint>

namespace cropclust {

using Rgb = std::array<std::uint8_t, 3>;

// Largest encodable label + 1.
inline constexpr std::uint32_t kPaletteSize = 1u << 24;

// Deterministic, injective label -> color map. Label 0 is black; label L > 0
// takes the bytes (r, g, b) of L * 2654435761 mod 2^24. The multiplier is odd,
// so the map is a bijection on [0, 2^24) and only label 0 lands on black.
// Throws RangeError for label >= 2^24.
Rgb label_to_color(std::uint32_t label);

// Exact inverse of label_to_color. Every triple is in the palette image.
std::uint32_t color_to_label(const Rgb& rgb);

}  // namespace cropclust
