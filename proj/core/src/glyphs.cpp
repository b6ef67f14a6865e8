#include "scmkit/glyphs.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "scmkit/errors.hpp"
#include "scmkit/pgm.hpp"

namespace scmkit {

namespace {

struct Segment {
  double x0, y0, x1, y1;
};

constexpr double kHalfStroke = 2.0;

// Stroke geometry in tile coordinates (pixel centres at i + 0.5).
const std::array<std::vector<Segment>, kLetterCount>& stroke_table() {
  static const std::array<std::vector<Segment>, kLetterCount> table = {{
      /* H */ {{8, 5, 8, 27}, {24, 5, 24, 27}, {8, 16, 24, 16}},
      /* K */ {{9, 5, 9, 27}, {24, 5, 10, 18}, {14, 14, 24, 27}},
      /* L */ {{9, 5, 9, 27}, {9, 27, 24, 27}},
      /* V */ {{7, 5, 16, 27}, {25, 5, 16, 27}},
      /* W */ {{5, 5, 10, 27}, {10, 27, 16, 11}, {16, 11, 22, 27}, {22, 27, 27, 5}},
      /* X */ {{8, 5, 24, 27}, {24, 5, 8, 27}},
      /* Y */ {{8, 5, 16, 16}, {24, 5, 16, 16}, {16, 16, 16, 27}},
      /* Z */ {{8, 5, 24, 5}, {24, 5, 8, 27}, {8, 27, 24, 27}},
  }};
  return table;
}

double distance_to_segment(double px, double py, const Segment& s) {
  const double dx = s.x1 - s.x0;
  const double dy = s.y1 - s.y0;
  const double len2 = dx * dx + dy * dy;
  double t = len2 > 0.0 ? ((px - s.x0) * dx + (py - s.y0) * dy) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  const double ex = s.x0 + t * dx - px;
  const double ey = s.y0 + t * dy - py;
  return std::sqrt(ex * ex + ey * ey);
}

GrayImage render_glyph(const std::vector<Segment>& strokes) {
  GrayImage img(kGlyphSize, kGlyphSize, 0);
  for (int y = 0; y < kGlyphSize; ++y) {
    for (int x = 0; x < kGlyphSize; ++x) {
      const double px = x + 0.5;
      const double py = y + 0.5;
      for (const auto& s : strokes) {
        if (distance_to_segment(px, py, s) <= kHalfStroke) {
          img.at(x, y) = 255;
          break;
        }
      }
    }
  }
  return img;
}

}  // namespace

char letter_char(Letter l) { return "HKLVWXYZ"[letter_index(l)]; }

std::optional<Letter> letter_from_char(char c) {
  for (Letter l : kLetters) {
    if (letter_char(l) == c) return l;
  }
  return std::nullopt;
}

GlyphSet::GlyphSet(std::array<GrayImage, kLetterCount> templates) : templates_(std::move(templates)) {
  for (const auto& t : templates_) {
    if (t.width() != kGlyphSize || t.height() != kGlyphSize) {
      throw ConfigError("glyph templates must be 32x32");
    }
  }
}

GlyphSet GlyphSet::builtin() {
  std::array<GrayImage, kLetterCount> templates;
  for (std::size_t i = 0; i < kLetterCount; ++i) templates[i] = render_glyph(stroke_table()[i]);
  return GlyphSet(std::move(templates));
}

GlyphSet GlyphSet::load(const std::filesystem::path& directory) {
  std::array<GrayImage, kLetterCount> templates;
  for (Letter l : kLetters) {
    const auto path = directory / (std::string(1, letter_char(l)) + ".pgm");
    GrayImage img = read_pgm(path);
    if (img.width() != kGlyphSize || img.height() != kGlyphSize) {
      throw ConfigError(path.string() + ": glyph template must be 32x32");
    }
    templates[letter_index(l)] = std::move(img);
  }
  return GlyphSet(std::move(templates));
}

double normalized_cross_correlation(const GrayImage& a, const GrayImage& b) {
  if (a.size() != b.size()) return 0.0;
  const double n = static_cast<double>(a.size());
  double sa = 0.0;
  double sb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sa += a.pixels()[i];
    sb += b.pixels()[i];
  }
  const double ma = sa / n;
  const double mb = sb / n;
  double cab = 0.0;
  double caa = 0.0;
  double cbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = a.pixels()[i] - ma;
    const double db = b.pixels()[i] - mb;
    cab += da * db;
    caa += da * da;
    cbb += db * db;
  }
  if (caa == 0.0 || cbb == 0.0) return 0.0;
  return cab / std::sqrt(caa * cbb);
}

}  // namespace scmkit
