#pragma once

#include <array>
#include <bitset>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "scmkit/image.hpp"
#include "scmkit/rng.hpp"
#include "scmkit/stats/hypothesis_tests.hpp"

namespace scmkit::flag {

inline constexpr int kTilesPerSide = 16;
inline constexpr int kTileCount = kTilesPerSide * kTilesPerSide;
inline constexpr int kTilePixels = kImageSize / kTilesPerSide;
inline constexpr int kClassCount = 8;
inline constexpr int kForegroundTiles = 80;
inline constexpr int kForbiddenCount = 24;

/// Tile roles, index row * 16 + column; set = foreground.
using TileMap = std::bitset<kTileCount>;

struct PatternSpec {
  std::array<TileMap, kClassCount> masks;
  std::array<std::string, kClassCount> names;
  std::vector<int> forbidden;  ///< sorted tile indices

  /// Throws ConfigError unless every mask has 80 foreground tiles, none of them
  /// forbidden, masks differ pairwise in at least 16 tiles, and the forbidden
  /// set holds 24 distinct in-range indices.
  void validate() const;
  bool is_forbidden(int tile) const;

  /// The shipped set (data/default_patterns.txt).
  static const PatternSpec& default_spec();
};

/// Text format: "class <i> [name]" followed by 16 rows of 16 '0'/'1'
/// characters, for each of the 8 classes, and one "forbidden <i> <i> ..." line.
/// '#' starts a comment. The result is validated.
PatternSpec parse_pattern_spec(std::string_view text, const std::string& origin = "<patterns>");
PatternSpec load_pattern_spec(const std::filesystem::path& path);
std::string serialize_pattern_spec(const PatternSpec& spec);
/// The text of the shipped pattern file.
std::string_view default_pattern_text();

/// round(scale * Beta(a, b) + offset), clamped to [lo, hi].
struct IntensityLaw {
  double a = 4.0;
  double b = 2.0;
  double scale = 152.0;
  double offset = 96.0;
  int lo = 96;
  int hi = 248;

  int draw(RngStream& rng) const;
  /// Exact probability of every integer lo..hi under the rounded law.
  std::vector<double> lattice_probabilities() const;
  double mean() const { return scale * a / (a + b) + offset; }
};

struct FlagLaws {
  IntensityLaw foreground{4.0, 2.0, 152.0, 96.0, 96, 248};
  IntensityLaw background{2.0, 4.0, 192.0, 8.0, 8, 200};
};

struct FlagSample {
  GrayImage image;
  int cls = 0;
  TileMap roles;
};

/// Fills each 16x16-pixel tile with iid draws from its role's law, in raster
/// pixel order. Throws std::invalid_argument for a class outside 0..7.
FlagSample generate_flag(RngStream& rng, int cls, const PatternSpec& spec, const FlagLaws& laws = {});
GrayImage render_flag(RngStream& rng, const TileMap& roles, const FlagLaws& laws = {});

inline constexpr double kForegroundBoundary = 148.0;

/// Tile is foreground iff its mean intensity exceeds `boundary`.
TileMap infer_foreground(const GrayImage& image, double boundary = kForegroundBoundary);

struct PatternMatch {
  int cls = 0;
  int mismatches = 0;
  double rmae = 0.0;  ///< mismatches / 256
  std::vector<int> forbidden_violations;
  bool accepted = false;  ///< rmae <= bound
};

inline constexpr double kRmaeBound = 1.0 / kTileCount;

/// Closest class by tile mismatches (lowest class index on ties).
PatternMatch classify_pattern(const TileMap& map, const PatternSpec& spec, double rmae_bound = kRmaeBound);

struct TextureCheck {
  std::vector<stats::MoransResult> tiles;  ///< a constant tile yields pass = false, NaN fields
  int tiles_passed = 0;
  double pass_fraction = 0.0;
  bool pass = false;  ///< pass_fraction >= min_pass_fraction
};

/// Rook-adjacency Moran's I on every tile.
TextureCheck check_tile_texture(const GrayImage& image, double alpha = 0.05,
                                double min_pass_fraction = 0.95);

/// Groups the lattice lo..hi into consecutive runs of roughly equal
/// probability; returns the first lattice value of each group.
std::vector<int> equal_probability_bins(const IntensityLaw& law, int bins);

struct IntensityGof {
  stats::GofResult foreground;
  stats::GofResult background;
  std::vector<double> foreground_expected;
  std::vector<double> background_expected;
};

/// Pearson GOF of the pooled foreground and background pixels (roles from
/// `map`) against their rounded laws. Pixels outside a law's support fall in
/// the nearest edge bin. Throws std::invalid_argument when bins < 2 or either
/// role is empty.
IntensityGof check_intensity_gof(const GrayImage& image, const TileMap& map, int bins = 16,
                                 double alpha = 0.05, const FlagLaws& laws = {});

/// Tile-move corruption: one foreground tile moves to a free, allowed
/// background tile. Returns (from, to).
std::pair<int, int> move_tile(TileMap& roles, const PatternSpec& spec, RngStream& rng);
/// Forbidden-tile corruption: one forbidden tile becomes foreground.
int set_forbidden_tile(TileMap& roles, const PatternSpec& spec, RngStream& rng);

}  // namespace scmkit::flag
