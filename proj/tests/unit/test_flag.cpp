#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "oracles.hpp"
#include "scmkit/errors.hpp"
#include "scmkit/flag.hpp"

using namespace scmkit;
using namespace scmkit::flag;

namespace {

const PatternSpec& spec() { return PatternSpec::default_spec(); }

FlagSample sample(std::uint64_t seed, int cls) {
  RngStream rng(seed, 0);
  return generate_flag(rng, cls, spec());
}

int tile_of(int x, int y) { return (y / kTilePixels) * kTilesPerSide + x / kTilePixels; }

// 3x3 box blur confined to each tile (replicated tile borders).
GrayImage blur_tiles(const GrayImage& img) {
  GrayImage out = img;
  for (int y = 0; y < kImageSize; ++y) {
    for (int x = 0; x < kImageSize; ++x) {
      const int x0 = x / kTilePixels * kTilePixels, y0 = y / kTilePixels * kTilePixels;
      int sum = 0;
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          sum += img.at(std::clamp(x + dx, x0, x0 + kTilePixels - 1), std::clamp(y + dy, y0, y0 + kTilePixels - 1));
        }
      }
      out.at(x, y) = static_cast<std::uint8_t>((sum + 4) / 9);
    }
  }
  return out;
}

}  // namespace

TEST(FlagPatterns, DefaultSpecInvariants) {
  EXPECT_NO_THROW(spec().validate());
  EXPECT_EQ(spec().forbidden.size(), static_cast<std::size_t>(kForbiddenCount));
  for (int c = 0; c < kClassCount; ++c) {
    EXPECT_EQ(spec().masks[c].count(), 80u);
    for (int f : spec().forbidden) EXPECT_FALSE(spec().masks[c].test(f));
    for (int d = c + 1; d < kClassCount; ++d) EXPECT_GE((spec().masks[c] ^ spec().masks[d]).count(), 16u);
  }
}

TEST(FlagPatterns, EmbeddedTextEqualsDataFile) {
  std::ifstream in(SCMKIT_PATTERN_FILE, std::ios::binary);
  ASSERT_TRUE(in);
  std::ostringstream buf;
  buf << in.rdbuf();
  EXPECT_EQ(std::string(default_pattern_text()), buf.str());
}

TEST(FlagPatterns, SerializeParseRoundTrip) {
  const PatternSpec back = parse_pattern_spec(serialize_pattern_spec(spec()));
  EXPECT_EQ(back.masks, spec().masks);
  EXPECT_EQ(back.forbidden, spec().forbidden);
  EXPECT_EQ(back.names, spec().names);
}

TEST(FlagPatterns, InvalidSpecsRejected) {
  PatternSpec s = spec();
  for (int t = 0; t < kTileCount; ++t) {
    if (s.masks[2].test(t)) {
      s.masks[2].reset(t);  // 79 foreground tiles
      break;
    }
  }
  EXPECT_THROW(s.validate(), ConfigError);
  s = spec();
  s.masks[1] = s.masks[0];
  EXPECT_THROW(s.validate(), ConfigError);
  s = spec();
  s.forbidden.pop_back();
  EXPECT_THROW(s.validate(), ConfigError);
  EXPECT_THROW(parse_pattern_spec("class 0\n0101\n"), ConfigError);
  EXPECT_THROW(load_pattern_spec("/nonexistent/patterns.txt"), IoError);
}

TEST(FlagIntensity, SupportAndExactCounts) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const auto f = sample(s, static_cast<int>(s % kClassCount));
    EXPECT_EQ(f.roles, spec().masks[f.cls]);
    int fg_pixels = 0;
    for (int y = 0; y < kImageSize; ++y) {
      for (int x = 0; x < kImageSize; ++x) {
        const int v = f.image.at(x, y);
        if (f.roles.test(tile_of(x, y))) {
          ++fg_pixels;
          ASSERT_GE(v, 96);
          ASSERT_LE(v, 248);
        } else {
          ASSERT_GE(v, 8);
          ASSERT_LE(v, 200);
        }
      }
    }
    EXPECT_EQ(fg_pixels, 80 * 256);
  }
}

TEST(FlagIntensity, ForegroundMean) {
  double sum = 0.0, n = 0.0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    const auto f = sample(1000 + s, static_cast<int>(s % kClassCount));
    for (int y = 0; y < kImageSize; ++y) {
      for (int x = 0; x < kImageSize; ++x) {
        if (!f.roles.test(tile_of(x, y))) continue;
        sum += f.image.at(x, y);
        n += 1.0;
      }
    }
  }
  EXPECT_NEAR(sum / n, 152.0 * 2.0 / 3.0 + 96.0, 0.5);
}

TEST(FlagIntensity, LatticeProbabilitiesMatchBoost) {
  const FlagLaws laws;
  for (const auto& law : {laws.foreground, laws.background}) {
    const auto p = law.lattice_probabilities();
    EXPECT_NEAR(std::accumulate(p.begin(), p.end(), 0.0), 1.0, 1e-12);
    for (int v = law.lo + 1; v < law.hi; ++v) {
      const double want = oracle::regularized_beta((v + 0.5 - law.offset) / law.scale, law.a, law.b) -
                          oracle::regularized_beta((v - 0.5 - law.offset) / law.scale, law.a, law.b);
      EXPECT_NEAR(p[v - law.lo], want, 1e-12) << v;
    }
  }
}

TEST(FlagInference, GeneratedImagesRecoverMask) {
  for (std::uint64_t s = 0; s < 40; ++s) {
    const auto f = sample(2000 + s, static_cast<int>(s % kClassCount));
    const auto map = infer_foreground(f.image);
    EXPECT_EQ(map, f.roles);
    const auto m = classify_pattern(map, spec());
    EXPECT_EQ(m.cls, f.cls);
    EXPECT_EQ(m.rmae, 0.0);
    EXPECT_TRUE(m.accepted);
  }
}

TEST(FlagInference, BoundaryRule) {
  EXPECT_TRUE(infer_foreground(GrayImage(kImageSize, kImageSize, 100)).none());
  EXPECT_TRUE(infer_foreground(GrayImage(kImageSize, kImageSize, 149)).all());
  EXPECT_TRUE(infer_foreground(GrayImage(kImageSize, kImageSize, 148)).none());
}

TEST(FlagInference, PatternClassificationExamples) {
  TileMap map = spec().masks[3];
  auto m = classify_pattern(map, spec());
  EXPECT_EQ(m.cls, 3);
  EXPECT_EQ(m.rmae, 0.0);
  EXPECT_TRUE(m.forbidden_violations.empty());

  RngStream rng(1, 0);
  const auto [from, to] = move_tile(map, spec(), rng);
  EXPECT_TRUE(spec().masks[3].test(from));
  EXPECT_FALSE(spec().masks[3].test(to));
  EXPECT_FALSE(spec().is_forbidden(to));
  m = classify_pattern(map, spec());
  EXPECT_EQ(m.cls, 3);
  EXPECT_DOUBLE_EQ(m.rmae, 2.0 / 256.0);
  EXPECT_FALSE(m.accepted);

  map = spec().masks[3];
  const int f = set_forbidden_tile(map, spec(), rng);
  EXPECT_TRUE(spec().is_forbidden(f));
  m = classify_pattern(map, spec());
  EXPECT_EQ(m.forbidden_violations, std::vector<int>{f});
}

TEST(FlagTexture, IidTilesPassAtNominalRate) {
  double fraction = 0.0;
  const int images = 20;
  for (int s = 0; s < images; ++s) fraction += check_tile_texture(sample(3000 + s, s % 8).image).pass_fraction;
  EXPECT_NEAR(fraction / images, 0.95, 0.015);
}

TEST(FlagTexture, BlurredTilesFail) {
  const auto t = check_tile_texture(blur_tiles(sample(4000, 2).image));
  EXPECT_LT(t.pass_fraction, 0.05);
  EXPECT_FALSE(t.pass);
}

TEST(FlagTexture, ConstantTileFails) {
  GrayImage img = sample(4001, 0).image;
  for (int y = 0; y < kTilePixels; ++y) {
    for (int x = 0; x < kTilePixels; ++x) img.at(x, y) = 50;
  }
  const auto t = check_tile_texture(img);
  EXPECT_FALSE(t.tiles[0].pass);
  EXPECT_TRUE(std::isnan(t.tiles[0].z_score));
}

TEST(FlagGof, ExpectedCountsAndCalibration) {
  int fg_pass = 0, bg_pass = 0;
  const int images = 400;
  for (int s = 0; s < images; ++s) {
    const auto f = sample(5000 + s, s % 8);
    const auto g = check_intensity_gof(f.image, f.roles);
    if (s == 0) {
      EXPECT_NEAR(std::accumulate(g.foreground_expected.begin(), g.foreground_expected.end(), 0.0), 20480.0, 1e-6);
      EXPECT_NEAR(std::accumulate(g.background_expected.begin(), g.background_expected.end(), 0.0), 176.0 * 256,
                  1e-6);
    }
    fg_pass += g.foreground.pass;
    bg_pass += g.background.pass;
  }
  EXPECT_NEAR(fg_pass / static_cast<double>(images), 0.95, 0.035);
  EXPECT_NEAR(bg_pass / static_cast<double>(images), 0.95, 0.035);
}

TEST(FlagGof, UniformForegroundFails) {
  RngStream rng(6, 0);
  int failed = 0;
  for (int s = 0; s < 100; ++s) {
    auto f = sample(6000 + s, s % 8);
    for (int y = 0; y < kImageSize; ++y) {
      for (int x = 0; x < kImageSize; ++x) {
        if (f.roles.test(tile_of(x, y))) f.image.at(x, y) = static_cast<std::uint8_t>(96 + rng.uniform_int(153));
      }
    }
    failed += !check_intensity_gof(f.image, f.roles).foreground.pass;
  }
  EXPECT_EQ(failed, 100);
}

TEST(FlagGof, RejectsDegenerateInput) {
  const auto f = sample(7, 0);
  EXPECT_THROW(check_intensity_gof(f.image, TileMap{}), std::invalid_argument);
  EXPECT_THROW(check_intensity_gof(f.image, f.roles, 1), std::invalid_argument);
  RngStream rng(1, 0);
  EXPECT_THROW(generate_flag(rng, 8, spec()), std::invalid_argument);
}
