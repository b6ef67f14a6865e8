#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "scmkit/glyphs.hpp"
#include "scmkit/image.hpp"
#include "scmkit/rng.hpp"
#include "scmkit/stats/hypothesis_tests.hpp"

namespace scmkit::alphabet {

inline constexpr int kGridSize = 8;
inline constexpr int kCellCount = kGridSize * kGridSize;

/// Prescribed per-image letter counts, indexed by Letter.
inline constexpr std::array<int, kLetterCount> kLetterCounts = {24, 2, 16, 1, 1, 8, 8, 4};

/// Ordered pairs: X-Y (horizontal), Z-K, Z-V, Z-W (vertical).
enum class Pair { XY, ZK, ZV, ZW };
inline constexpr int kPairCount = 4;
inline constexpr std::array<int, kPairCount> kPairCounts = {8, 2, 1, 1};
std::string pair_name(Pair p);

/// Row-major 8x8 letter layout; cell (r, c) at index r * 8 + c.
using LetterGrid = std::array<Letter, kCellCount>;

std::string grid_to_string(const LetterGrid& grid);
LetterGrid grid_from_string(const std::string& text);

struct AlphabetConfig {
  double match_threshold = 0.8;
  double gof_alpha = 0.05;
};

struct AlphabetSample {
  GrayImage image;
  LetterGrid grid;
};

/// Random layout honouring the letter multiset and the four pair rules,
/// rendered as 32x32 tiles. Deterministic in the stream.
AlphabetSample generate_alphabet(RngStream& rng, const GlyphSet& glyphs);
LetterGrid random_letter_grid(RngStream& rng);
GrayImage render_grid(const LetterGrid& grid, const GlyphSet& glyphs);

struct TileMatch {
  std::optional<Letter> letter;  ///< empty = unrecognized
  double score = 0.0;
};
using TileMatches = std::array<TileMatch, kCellCount>;

/// Template matching per tile: best normalized cross-correlation, rejected
/// below `threshold`. Throws std::invalid_argument if threshold is not in (0,1)
/// or the image is not 256x256.
TileMatches classify_tiles(const GrayImage& image, const GlyphSet& glyphs, double threshold);

/// The recognized grid, or nullopt if any tile was rejected.
std::optional<LetterGrid> recognized_grid(const TileMatches& matches);

struct LetterPrevalence {
  std::array<int, kLetterCount> counts{};
  stats::GofResult gof;
  bool exact = false;
};

LetterPrevalence check_letter_prevalence(const LetterGrid& grid, double alpha);
/// Throws AnalysisError when any tile is unrecognized.
LetterPrevalence check_letter_prevalence(const TileMatches& matches, double alpha);

struct PairViolation {
  int row = 0;
  int col = 0;
  std::string reason;
};

struct PairPrevalence {
  std::array<int, kPairCount> counts{};
  std::vector<PairViolation> violations;

  /// Counts equal the prescription and no pairing rule is broken.
  bool ok() const { return counts == kPairCounts && violations.empty(); }
};

PairPrevalence check_pair_prevalence(const LetterGrid& grid);

/// Pair-break corruption: one Y of an X-Y pair becomes X. Returns the changed cell.
int break_pair(LetterGrid& grid, RngStream& rng);

}  // namespace scmkit::alphabet
