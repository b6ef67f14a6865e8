#include <benchmark/benchmark.h>

#include "scmkit/alphabet.hpp"
#include "scmkit/flag.hpp"
#include "scmkit/glyphs.hpp"
#include "scmkit/voronoi.hpp"

using namespace scmkit;

static void BM_GenerateAlphabet(benchmark::State& state) {
  const GlyphSet glyphs = GlyphSet::builtin();
  std::uint64_t seed = 0;
  for (auto _ : state) {
    RngStream rng(seed++, 0);
    benchmark::DoNotOptimize(alphabet::generate_alphabet(rng, glyphs));
  }
}
BENCHMARK(BM_GenerateAlphabet);

static void BM_GenerateVoronoi(benchmark::State& state) {
  const int cls = static_cast<int>(state.range(0));
  std::uint64_t seed = 0;
  for (auto _ : state) {
    RngStream rng(seed++, 0);
    benchmark::DoNotOptimize(voronoi::generate_voronoi(rng, cls));
  }
}
BENCHMARK(BM_GenerateVoronoi)->Arg(16)->Arg(64);

static void BM_GenerateFlag(benchmark::State& state) {
  const auto& spec = flag::PatternSpec::default_spec();
  std::uint64_t seed = 0;
  for (auto _ : state) {
    RngStream rng(seed, 0);
    benchmark::DoNotOptimize(flag::generate_flag(rng, static_cast<int>(seed++ % flag::kClassCount), spec));
  }
}
BENCHMARK(BM_GenerateFlag);
