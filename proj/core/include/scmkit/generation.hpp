#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "scmkit/config.hpp"
#include "scmkit/flag.hpp"
#include "scmkit/glyphs.hpp"
#include "scmkit/manifest.hpp"
#include "scmkit/voronoi.hpp"

namespace scmkit {

/// Assets and parameters shared by every generated image of a run.
struct GenerationContext {
  GlyphSet glyphs = GlyphSet::builtin();
  flag::PatternSpec patterns = flag::PatternSpec::default_spec();
  voronoi::VoronoiParams voronoi;
  flag::FlagLaws laws;
};

/// Loads the glyph directory and pattern file named in the config, if any.
GenerationContext make_generation_context(const AnalysisConfig& config);

/// Class labels of a model with their sampling weights.
struct ClassMix {
  std::vector<int> classes;
  std::vector<double> weights;  ///< normalized to sum 1

  /// Draws a class from u in [0, 1).
  int pick(double u) const;
};

/// "" or "uniform" = equal weights over the model's classes; otherwise
/// comma-separated "class:weight" entries, e.g. "16:1,64:3". The alphabet
/// model has no classes and accepts only the uniform form. Throws ConfigError.
ClassMix parse_class_mix(ModelId model, std::string_view text);
std::string class_mix_to_string(const ClassMix& mix);

struct GeneratedImage {
  GrayImage image;
  std::map<std::string, double> truth;
};

/// Rebuilds the image of one manifest record from its seed, class and
/// corruption tag. Throws ConfigError for an external model, a missing or
/// invalid class, or an unknown corruption.
GeneratedImage regenerate_image(ModelId model, const ManifestRecord& record, const GenerationContext& context);

struct GenerateRequest {
  ModelId model = ModelId::kAlphabet;
  std::size_t count = 0;
  std::uint64_t seed = 0;
  ClassMix mix;
  unsigned jobs = 1;
  std::string run_config_json = "{}";
};

/// Image i uses RngStream(image_seed(seed, i), 0); its class is drawn from
/// stream 1 of the same seed.
EnsembleManifest generate_ensemble(const GenerateRequest& request, const GenerationContext& context,
                                   const std::filesystem::path& out_dir);

/// Corruption kinds: alphabet "pair_break"; voronoi "region_count"; flag
/// "tile_move" and "forbidden_tile".
std::vector<std::string> corruption_kinds(ModelId model);

struct CorruptRequest {
  std::string kind;
  double rate = 0.0;
  std::uint64_t seed = 0;
  unsigned jobs = 1;
};

/// Exactly round(rate * n) images, chosen by `seed`, are re-rendered with one
/// injected error and tagged "<kind>:<seed>" in their record; all other files
/// are copied unchanged. Throws ConfigError for an incompatible kind, a rate
/// outside [0,1], an external ensemble or one that is already corrupted.
EnsembleManifest corrupt_ensemble(const Ensemble& input, const CorruptRequest& request,
                                  const GenerationContext& context, const std::filesystem::path& out_dir);

}  // namespace scmkit
