#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>

#include "scmkit/image.hpp"

namespace scmkit {

/// The eight letters of the alphabet model, in canonical order.
enum class Letter : std::uint8_t { H, K, L, V, W, X, Y, Z };

inline constexpr int kLetterCount = 8;
inline constexpr std::array<Letter, kLetterCount> kLetters = {
    Letter::H, Letter::K, Letter::L, Letter::V, Letter::W, Letter::X, Letter::Y, Letter::Z};
inline constexpr int kGlyphSize = 32;

char letter_char(Letter l);
std::optional<Letter> letter_from_char(char c);
inline std::size_t letter_index(Letter l) { return static_cast<std::size_t>(l); }

/// One 32x32 template per letter; letter pixels 255, background 0.
class GlyphSet {
 public:
  explicit GlyphSet(std::array<GrayImage, kLetterCount> templates);

  /// Block-stroke capitals, 4 px strokes, centred in the tile.
  static GlyphSet builtin();
  /// Reads <dir>/<letter>.pgm for every letter; each must be 32x32.
  static GlyphSet load(const std::filesystem::path& directory);

  const GrayImage& glyph(Letter l) const { return templates_[letter_index(l)]; }

 private:
  std::array<GrayImage, kLetterCount> templates_;
};

/// Pearson correlation of two equally-sized rasters; 0 when either is constant.
double normalized_cross_correlation(const GrayImage& a, const GrayImage& b);

}  // namespace scmkit
