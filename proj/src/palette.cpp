#include "cropclust/palette.hpp"

#include <string>

#include "cropclust/errors.hpp"

namespace cropclust {
namespace {

constexpr std::uint32_t kMask = kPaletteSize - 1;
constexpr std::uint32_t kMultiplier = 2654435761u;

// Inverse of an odd number modulo 2^32 by Newton iteration; each step doubles
// the number of correct low bits.
constexpr std::uint32_t inverse_mod_2_32(std::uint32_t a) {
  std::uint32_t x = a;
  for (int i = 0; i < 5; ++i) x *= 2u - a * x;
  return x;
}

constexpr std::uint32_t kInverse = inverse_mod_2_32(kMultiplier) & kMask;
static_assert(((kMultiplier * kInverse) & kMask) == 1u);

}  // namespace

Rgb label_to_color(std::uint32_t label) {
  if (label >= kPaletteSize) {
    throw RangeError("label " + std::to_string(label) +
                     " exceeds the 24-bit color palette");
  }
  const std::uint32_t h = (label * kMultiplier) & kMask;
  return {static_cast<std::uint8_t>(h >> 16), static_cast<std::uint8_t>(h >> 8),
          static_cast<std::uint8_t>(h)};
}

std::uint32_t color_to_label(const Rgb& rgb) {
  const std::uint32_t h = (std::uint32_t{rgb[0]} << 16) |
                          (std::uint32_t{rgb[1]} << 8) | std::uint32_t{rgb[2]};
  return (h * kInverse) & kMask;
}

}  // namespace cropclust
