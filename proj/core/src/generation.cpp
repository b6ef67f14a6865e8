#include "scmkit/generation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "scmkit/alphabet.hpp"
#include "scmkit/errors.hpp"
#include "scmkit/parallel.hpp"
#include "scmkit/pgm.hpp"
#include "scmkit/stats/hypothesis_tests.hpp"

namespace scmkit {

namespace {

std::string indexed_key(const char* prefix, std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%s.%03zu", prefix, i);
  return buf;
}

struct CorruptionTag {
  std::string kind;
  std::uint64_t seed = 0;
};

CorruptionTag parse_tag(const std::string& tag) {
  const auto colon = tag.find(':');
  if (colon == std::string::npos) throw ConfigError("malformed corruption tag '" + tag + "'");
  CorruptionTag t;
  t.kind = tag.substr(0, colon);
  try {
    std::size_t used = 0;
    t.seed = std::stoull(tag.substr(colon + 1), &used);
    if (used != tag.size() - colon - 1) throw std::invalid_argument(tag);
  } catch (const std::exception&) {
    throw ConfigError("malformed corruption tag '" + tag + "'");
  }
  return t;
}

int required_label(const ManifestRecord& record) {
  if (!record.label) throw ConfigError(record.file + ": record has no class label");
  return *record.label;
}

GeneratedImage alphabet_image(const ManifestRecord& record, const GenerationContext& ctx,
                              const std::optional<CorruptionTag>& tag) {
  RngStream rng(record.seed, 0);
  auto grid = alphabet::random_letter_grid(rng);
  GeneratedImage out;
  if (tag) {
    if (tag->kind != "pair_break") throw ConfigError("alphabet has no corruption '" + tag->kind + "'");
    RngStream crng = RngStream(record.seed, 2).fork(tag->seed);
    out.truth["corrupted_cell"] = alphabet::break_pair(grid, crng);
  }
  out.image = alphabet::render_grid(grid, ctx.glyphs);
  std::array<int, kLetterCount> counts{};
  for (Letter l : grid) ++counts[letter_index(l)];
  for (Letter l : kLetters) {
    out.truth[std::string("letters.") + letter_char(l)] = counts[letter_index(l)];
  }
  const auto pairs = alphabet::check_pair_prevalence(grid);
  for (int p = 0; p < alphabet::kPairCount; ++p) {
    out.truth["pairs." + alphabet::pair_name(static_cast<alphabet::Pair>(p))] =
        pairs.counts[static_cast<std::size_t>(p)];
  }
  return out;
}

GeneratedImage voronoi_image(const ManifestRecord& record, const GenerationContext& ctx,
                             const std::optional<CorruptionTag>& tag) {
  const int cls = required_label(record);
  if (!voronoi::is_valid_class(cls)) throw ConfigError(record.file + ": invalid voronoi class");
  int cells = cls;
  if (tag) {
    if (tag->kind != "region_count") throw ConfigError("voronoi has no corruption '" + tag->kind + "'");
    // Halfway to the next class: off-class by construction.
    cells = cls + 8;
  }
  RngStream rng(record.seed, 0);
  auto sample = voronoi::generate_voronoi_cells(rng, cells, ctx.voronoi);
  GeneratedImage out;
  out.image = std::move(sample.image);
  out.truth["class"] = cls;
  out.truth["region_count"] = sample.truth.region_count;
  const auto rho = stats::spearman_rho(sample.truth.areas, sample.truth.intensities);
  if (rho) out.truth["rho"] = *rho;
  for (std::size_t i = 0; i < sample.truth.areas.size(); ++i) {
    out.truth[indexed_key("area", i)] = sample.truth.areas[i];
    out.truth[indexed_key("intensity", i)] = sample.truth.intensities[i];
  }
  return out;
}

GeneratedImage flag_image(const ManifestRecord& record, const GenerationContext& ctx,
                          const std::optional<CorruptionTag>& tag) {
  const int cls = required_label(record);
  if (cls < 0 || cls >= flag::kClassCount) throw ConfigError(record.file + ": invalid flag class");
  flag::TileMap roles = ctx.patterns.masks[static_cast<std::size_t>(cls)];
  GeneratedImage out;
  if (tag) {
    RngStream crng = RngStream(record.seed, 2).fork(tag->seed);
    if (tag->kind == "tile_move") {
      const auto [from, to] = flag::move_tile(roles, ctx.patterns, crng);
      out.truth["moved_from"] = from;
      out.truth["moved_to"] = to;
    } else if (tag->kind == "forbidden_tile") {
      out.truth["forbidden_tile"] = flag::set_forbidden_tile(roles, ctx.patterns, crng);
    } else {
      throw ConfigError("flag has no corruption '" + tag->kind + "'");
    }
  }
  RngStream rng(record.seed, 0);
  out.image = flag::render_flag(rng, roles, ctx.laws);
  out.truth["class"] = cls;
  out.truth["fg_tiles"] = static_cast<double>(roles.count());
  return out;
}

std::vector<int> model_classes(ModelId model) {
  switch (model) {
    case ModelId::kVoronoi: return {voronoi::kClasses.begin(), voronoi::kClasses.end()};
    case ModelId::kFlag: {
      std::vector<int> c(flag::kClassCount);
      std::iota(c.begin(), c.end(), 0);
      return c;
    }
    default: return {};
  }
}

}  // namespace

GenerationContext make_generation_context(const AnalysisConfig& config) {
  GenerationContext ctx;
  if (!config.alphabet.glyph_dir.empty()) ctx.glyphs = GlyphSet::load(config.alphabet.glyph_dir);
  if (!config.flag.pattern_file.empty()) ctx.patterns = flag::load_pattern_spec(config.flag.pattern_file);
  return ctx;
}

int ClassMix::pick(double u) const {
  double cum = 0.0;
  for (std::size_t i = 0; i < classes.size(); ++i) {
    cum += weights[i];
    if (u < cum) return classes[i];
  }
  return classes.back();
}

ClassMix parse_class_mix(ModelId model, std::string_view text) {
  const std::vector<int> allowed = model_classes(model);
  ClassMix mix;
  if (text.empty() || text == "uniform") {
    mix.classes = allowed;
    mix.weights.assign(allowed.size(), allowed.empty() ? 0.0 : 1.0 / static_cast<double>(allowed.size()));
    return mix;
  }
  if (allowed.empty()) {
    throw ConfigError("model " + std::string(to_string(model)) + " takes no class mix");
  }
  std::istringstream in{std::string(text)};
  std::string item;
  double total = 0.0;
  while (std::getline(in, item, ',')) {
    const auto colon = item.find(':');
    int cls = 0;
    double w = 0.0;
    try {
      if (colon == std::string::npos) throw std::invalid_argument(item);
      std::size_t used_c = 0, used_w = 0;
      cls = std::stoi(item.substr(0, colon), &used_c);
      w = std::stod(item.substr(colon + 1), &used_w);
      if (used_c != colon || used_w != item.size() - colon - 1) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError("bad class-mix entry '" + item + "' (expected class:weight)");
    }
    if (std::find(allowed.begin(), allowed.end(), cls) == allowed.end()) {
      throw ConfigError("class " + std::to_string(cls) + " is not a " + std::string(to_string(model)) + " class");
    }
    if (std::find(mix.classes.begin(), mix.classes.end(), cls) != mix.classes.end()) {
      throw ConfigError("class " + std::to_string(cls) + " listed twice in class mix");
    }
    if (!(w >= 0.0) || !std::isfinite(w)) throw ConfigError("class-mix weights must be finite and >= 0");
    mix.classes.push_back(cls);
    mix.weights.push_back(w);
    total += w;
  }
  if (!(total > 0.0)) throw ConfigError("class-mix weights must not all be zero");
  for (double& w : mix.weights) w /= total;
  return mix;
}

std::string class_mix_to_string(const ClassMix& mix) {
  std::ostringstream out;
  out.precision(17);
  for (std::size_t i = 0; i < mix.classes.size(); ++i) {
    if (i) out << ',';
    out << mix.classes[i] << ':' << mix.weights[i];
  }
  return out.str();
}

GeneratedImage regenerate_image(ModelId model, const ManifestRecord& record, const GenerationContext& context) {
  std::optional<CorruptionTag> tag;
  if (record.corruption) tag = parse_tag(*record.corruption);
  switch (model) {
    case ModelId::kAlphabet: return alphabet_image(record, context, tag);
    case ModelId::kVoronoi: return voronoi_image(record, context, tag);
    case ModelId::kFlag: return flag_image(record, context, tag);
    case ModelId::kExternal: break;
  }
  throw ConfigError("external ensembles cannot be regenerated");
}

EnsembleManifest generate_ensemble(const GenerateRequest& request, const GenerationContext& context,
                                   const std::filesystem::path& out_dir) {
  if (request.model == ModelId::kExternal) throw ConfigError("cannot generate an external ensemble");
  const bool classed = request.model != ModelId::kAlphabet;
  if (classed && request.mix.classes.empty()) throw ConfigError("class mix is empty");

  EnsembleManifest manifest;
  manifest.model = request.model;
  manifest.global_seed = request.seed;
  manifest.run_config_json = request.run_config_json;
  manifest.records.resize(request.count);
  for (std::size_t i = 0; i < request.count; ++i) {
    ManifestRecord& r = manifest.records[i];
    r.file = image_file_name(i);
    r.seed = image_seed(request.seed, i);
    if (classed) r.label = request.mix.pick(RngStream(r.seed, 1).uniform());
  }

  std::vector<std::map<std::string, double>> truths(request.count);
  save_ensemble(
      manifest,
      [&](std::size_t i) {
        GeneratedImage g = regenerate_image(request.model, manifest.records[i], context);
        truths[i] = std::move(g.truth);
        return std::move(g.image);
      },
      out_dir, request.jobs);
  for (std::size_t i = 0; i < request.count; ++i) manifest.records[i].truth = std::move(truths[i]);
  // Rewrite the manifest now that the truth maps are filled in.
  write_manifest(manifest, out_dir);
  return manifest;
}

std::vector<std::string> corruption_kinds(ModelId model) {
  switch (model) {
    case ModelId::kAlphabet: return {"pair_break"};
    case ModelId::kVoronoi: return {"region_count"};
    case ModelId::kFlag: return {"tile_move", "forbidden_tile"};
    case ModelId::kExternal: break;
  }
  return {};
}

EnsembleManifest corrupt_ensemble(const Ensemble& input, const CorruptRequest& request,
                                  const GenerationContext& context, const std::filesystem::path& out_dir) {
  const ModelId model = input.manifest().model;
  const auto kinds = corruption_kinds(model);
  if (kinds.empty()) throw ConfigError("only generated SCM ensembles can be corrupted");
  if (std::find(kinds.begin(), kinds.end(), request.kind) == kinds.end()) {
    throw ConfigError("corruption '" + request.kind + "' does not apply to model " + std::string(to_string(model)));
  }
  if (!(request.rate >= 0.0 && request.rate <= 1.0)) throw ConfigError("corruption rate must be in [0,1]");
  for (const auto& r : input.manifest().records) {
    if (r.corruption) throw ConfigError("ensemble is already corrupted (" + r.file + ")");
  }
  if (std::filesystem::exists(out_dir) && std::filesystem::equivalent(out_dir, input.directory())) {
    throw ConfigError("corruption output directory must differ from its input");
  }

  EnsembleManifest manifest = input.manifest();
  const std::size_t n = manifest.records.size();
  const auto k = static_cast<std::size_t>(std::llround(request.rate * static_cast<double>(n)));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  RngStream pick(request.seed, 0xC0);
  pick.shuffle(std::span<std::size_t>(order));
  std::vector<bool> chosen(n, false);
  for (std::size_t i = 0; i < k; ++i) chosen[order[i]] = true;

  const std::string tag = request.kind + ":" + std::to_string(request.seed);
  for (std::size_t i = 0; i < n; ++i) {
    if (chosen[i]) manifest.records[i].corruption = tag;
  }
  std::vector<std::map<std::string, double>> truths(n);
  save_ensemble(
      manifest,
      [&](std::size_t i) {
        if (!chosen[i]) return input.image(i);
        GeneratedImage g = regenerate_image(model, manifest.records[i], context);
        truths[i] = std::move(g.truth);
        return std::move(g.image);
      },
      out_dir, request.jobs);
  for (std::size_t i = 0; i < n; ++i) {
    if (chosen[i]) manifest.records[i].truth = std::move(truths[i]);
  }
  write_manifest(manifest, out_dir);
  return manifest;
}

}  // namespace scmkit
