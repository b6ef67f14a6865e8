#include <benchmark/benchmark.h>

#include <vector>

#include "scmkit/alphabet.hpp"
#include "scmkit/ensemble_eval.hpp"
#include "scmkit/flag.hpp"
#include "scmkit/glyphs.hpp"
#include "scmkit/imgproc/glcm.hpp"
#include "scmkit/stats/hypothesis_tests.hpp"
#include "scmkit/voronoi.hpp"

using namespace scmkit;

static void BM_ClassifyAlphabetTiles(benchmark::State& state) {
  const GlyphSet glyphs = GlyphSet::builtin();
  RngStream rng(1, 0);
  const auto sample = alphabet::generate_alphabet(rng, glyphs);
  for (auto _ : state) benchmark::DoNotOptimize(alphabet::classify_tiles(sample.image, glyphs, 0.8));
}
BENCHMARK(BM_ClassifyAlphabetTiles);

static void BM_ExtractVoronoiRegions(benchmark::State& state) {
  RngStream rng(2, 0);
  const auto sample = voronoi::generate_voronoi(rng, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(voronoi::extract_regions(sample.image));
}
BENCHMARK(BM_ExtractVoronoiRegions)->Arg(16)->Arg(64);

static void BM_FlagTileTexture(benchmark::State& state) {
  RngStream rng(3, 0);
  const auto f = flag::generate_flag(rng, 0, flag::PatternSpec::default_spec());
  for (auto _ : state) benchmark::DoNotOptimize(flag::check_tile_texture(f.image));
}
BENCHMARK(BM_FlagTileTexture);

static void BM_FlagIntensityGof(benchmark::State& state) {
  RngStream rng(4, 0);
  const auto f = flag::generate_flag(rng, 1, flag::PatternSpec::default_spec());
  for (auto _ : state) benchmark::DoNotOptimize(flag::check_intensity_gof(f.image, f.roles));
}
BENCHMARK(BM_FlagIntensityGof);

static void BM_MoransI(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  RngStream rng(5, 0);
  std::vector<double> field(static_cast<std::size_t>(side * side));
  for (auto& v : field) v = rng.normal();
  for (auto _ : state) benchmark::DoNotOptimize(stats::morans_i(field, side, side));
}
BENCHMARK(BM_MoransI)->Arg(16)->Arg(64);

static void BM_Glcm(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  RngStream rng(6, 0);
  GrayImage img(side, side);
  for (auto& p : img.pixels()) p = static_cast<std::uint8_t>(rng.uniform_int(256));
  for (auto _ : state) benchmark::DoNotOptimize(imgproc::glcm_features(img));
}
BENCHMARK(BM_Glcm)->Arg(128)->Arg(256);

static void BM_ExtractFeatures(benchmark::State& state) {
  GrayImage img(128, 128);
  for (int y = 0; y < 128; ++y) {
    for (int x = 0; x < 128; ++x) img.at(x, y) = static_cast<std::uint8_t>((x / 16 + y / 16) % 2 ? 180 : 70);
  }
  for (auto _ : state) benchmark::DoNotOptimize(eval::extract_features(img));
}
BENCHMARK(BM_ExtractFeatures);

BENCHMARK_MAIN();
