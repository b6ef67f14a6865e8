#include "scmkit/analyzers.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "scmkit/errors.hpp"
#include "scmkit/parallel.hpp"

namespace scmkit {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string key(const char* prefix, long long n) { return std::string(prefix) + std::to_string(n); }

void require_model(const Ensemble& ensemble, ModelId model) {
  if (model == ModelId::kExternal) throw ConfigError("analyze needs an SCM model, not 'external'");
  const ModelId have = ensemble.manifest().model;
  if (have != ModelId::kExternal && have != model) {
    throw ConfigError(ensemble.directory().string() + ": ensemble was generated by model '" +
                      std::string(to_string(have)) + "', not '" + std::string(to_string(model)) + "'");
  }
}

GrayImage load_checked(const Ensemble& ensemble, std::size_t i, ModelId model) {
  GrayImage img = ensemble.image(i);
  check_image_shape(model, img, (ensemble.directory() / ensemble.manifest().records[i].file).string());
  return img;
}

void add_alphabet_aggregates(ContextReport& r) {
  std::size_t unrecognized = 0;
  for (const auto& img : r.images) {
    if (!img.checks.at("recognized").pass) {
      ++unrecognized;
      continue;
    }
    for (int p = 0; p < alphabet::kPairCount; ++p) {
      const std::string name = alphabet::pair_name(static_cast<alphabet::Pair>(p));
      const auto n = static_cast<long long>(img.values.at("pairs." + name));
      r.aggregates["pair_count." + name + "." + std::to_string(n)] += 1.0;
    }
  }
  r.aggregates["images"] = static_cast<double>(r.images.size());
  r.aggregates["unrecognized_images"] = static_cast<double>(unrecognized);
  if (unrecognized > 0) {
    r.notes.push_back(std::to_string(unrecognized) +
                      " image(s) had unrecognized tiles and were left out of the prevalence checks");
  }
}

void add_voronoi_aggregates(ContextReport& r, const VoronoiAnalysisConfig& config) {
  std::map<int, double> on_class;
  for (int c : voronoi::kClasses) on_class[c] = 0.0;
  std::size_t off_class = 0;
  for (const auto& img : r.images) {
    const auto n = static_cast<long long>(img.values.at("region_count"));
    r.aggregates[key("region_count_hist.", n)] += 1.0;
    auto it = img.values.find("recovered_class");
    if (it != img.values.end()) {
      on_class[static_cast<int>(it->second)] += 1.0;
    } else {
      ++off_class;
    }
  }
  double on_total = 0.0;
  for (const auto& [c, n] : on_class) {
    r.aggregates[key("class_hist.", c)] = n;
    on_total += n;
  }
  r.aggregates["images"] = static_cast<double>(r.images.size());
  r.aggregates["off_class_images"] = static_cast<double>(off_class);
  if (on_total > 0.0) {
    std::vector<double> observed;
    std::vector<double> expected;
    for (const auto& [c, n] : on_class) {
      observed.push_back(n);
      expected.push_back(on_total / static_cast<double>(voronoi::kClasses.size()));
    }
    const auto gof = stats::chi2_gof(observed, expected, config.class_gof_alpha);
    r.aggregates["class_gof.statistic"] = gof.statistic;
    r.aggregates["class_gof.critical_value"] = gof.critical_value;
    r.aggregates["class_gof.pass"] = gof.pass ? 1.0 : 0.0;
    r.notes.push_back("class GOF compares recovered on-class counts with a uniform class mix");
  } else {
    r.notes.push_back("no image fell within tolerance of a class; class GOF skipped");
  }
}

void add_flag_aggregates(ContextReport& r) {
  for (int c = 0; c < flag::kClassCount; ++c) r.aggregates[key("class_hist.", c)] = 0.0;
  double tiles = 0.0;
  double passed = 0.0;
  std::size_t forbidden = 0;
  for (const auto& img : r.images) {
    if (img.checks.at("pattern").pass) {
      r.aggregates[key("class_hist.", static_cast<long long>(img.values.at("class")))] += 1.0;
    }
    if (!img.checks.at("forbidden").pass) ++forbidden;
    tiles += flag::kTileCount;
    passed += img.values.at("texture_tiles_passed");
  }
  r.aggregates["images"] = static_cast<double>(r.images.size());
  r.aggregates["forbidden_images"] = static_cast<double>(forbidden);
  r.aggregates["moran_tile_rejection_rate"] = tiles > 0.0 ? 1.0 - passed / tiles : kNaN;
}

std::vector<std::optional<int>> record_labels(const Ensemble& e) {
  std::vector<std::optional<int>> out;
  out.reserve(e.size());
  for (const auto& rec : e.manifest().records) out.push_back(rec.label);
  return out;
}

}  // namespace

ImageResult analyze_alphabet_image(const GrayImage& image, const GlyphSet& glyphs,
                                   const AlphabetAnalysisConfig& config) {
  ImageResult out;
  const auto matches = alphabet::classify_tiles(image, glyphs, config.match.match_threshold);
  int unrecognized = 0;
  for (const auto& m : matches) {
    if (!m.letter) ++unrecognized;
  }
  out.checks["recognized"] = {static_cast<double>(unrecognized), unrecognized == 0};
  out.values["unrecognized_tiles"] = unrecognized;
  const auto grid = alphabet::recognized_grid(matches);
  if (!grid) return out;

  const auto letters = alphabet::check_letter_prevalence(*grid, config.match.gof_alpha);
  out.checks["letter_prevalence"] = {letters.gof.statistic, letters.gof.pass};
  int deviation = 0;
  for (std::size_t i = 0; i < kLetterCount; ++i) {
    deviation += std::abs(letters.counts[i] - alphabet::kLetterCounts[i]);
    out.values[std::string("letters.") + letter_char(kLetters[i])] = letters.counts[i];
  }
  out.checks["letter_prevalence_exact"] = {static_cast<double>(deviation), letters.exact};

  const auto pairs = alphabet::check_pair_prevalence(*grid);
  int pair_deviation = static_cast<int>(pairs.violations.size());
  for (int p = 0; p < alphabet::kPairCount; ++p) {
    pair_deviation += std::abs(pairs.counts[p] - alphabet::kPairCounts[p]);
    out.values["pairs." + alphabet::pair_name(static_cast<alphabet::Pair>(p))] = pairs.counts[p];
  }
  out.checks["pair_prevalence"] = {static_cast<double>(pair_deviation), pairs.ok()};
  return out;
}

ImageResult analyze_voronoi_image(const GrayImage& image, std::optional<int> label,
                                  const VoronoiAnalysisConfig& config) {
  ImageResult out;
  voronoi::Regions regions;
  try {
    regions = voronoi::extract_regions(image, config.extract);
  } catch (const AnalysisError&) {
    out.checks["region_class"] = {0.0, false};
    out.checks["rank_correlation"] = {kNaN, false};
    if (label) out.checks["class_match"] = {kNaN, false};
    out.values["region_count"] = 0.0;
    return out;
  }
  const int count = static_cast<int>(regions.areas.size());
  const auto cls = voronoi::classify_region_count(count, config.class_tolerance);
  out.checks["region_class"] = {static_cast<double>(count), cls.label.has_value()};
  out.values["region_count"] = count;
  if (cls.label) out.values["recovered_class"] = *cls.label;

  std::optional<double> rho;
  if (count >= 2) rho = voronoi::check_rank_correlation(regions.areas, regions.mean_intensity);
  out.checks["rank_correlation"] = rho ? CheckResult{*rho, *rho >= config.rho_threshold} : CheckResult{kNaN, false};

  if (label) {
    out.checks["class_match"] = {static_cast<double>(std::abs(count - *label)), cls.label == label};
  }

  const auto implicit = voronoi::implicit_context(regions);
  const auto values = implicit.values();
  const auto& names = voronoi::ImplicitContextStats::names();
  for (std::size_t i = 0; i < values.size(); ++i) out.values[std::string("implicit.") + names[i]] = values[i];
  return out;
}

ImageResult analyze_flag_image(const GrayImage& image, std::optional<int> label, const flag::PatternSpec& patterns,
                               const FlagAnalysisConfig& config) {
  ImageResult out;
  const flag::TileMap map = flag::infer_foreground(image, config.fg_boundary);
  const auto match = flag::classify_pattern(map, patterns, config.rmae_bound);
  out.checks["pattern"] = {match.rmae, match.accepted};
  out.checks["forbidden"] = {static_cast<double>(match.forbidden_violations.size()),
                             match.forbidden_violations.empty()};
  out.values["class"] = match.cls;
  out.values["mismatches"] = match.mismatches;
  out.values["fg_tiles"] = static_cast<double>(map.count());

  const auto texture = flag::check_tile_texture(image, config.moran_alpha, config.tile_pass_fraction);
  out.checks["texture"] = {texture.pass_fraction, texture.pass};
  out.values["texture_tiles_passed"] = texture.tiles_passed;

  if (map.any() && !map.all()) {
    const auto gof = flag::check_intensity_gof(image, map, config.gof_bins, config.gof_alpha);
    out.checks["intensity_fg"] = {gof.foreground.statistic, gof.foreground.pass};
    out.checks["intensity_bg"] = {gof.background.statistic, gof.background.pass};
  } else {
    out.checks["intensity_fg"] = {kNaN, false};
    out.checks["intensity_bg"] = {kNaN, false};
  }
  if (label) out.checks["class_match"] = {static_cast<double>(match.cls), match.accepted && match.cls == *label};
  return out;
}

ContextReport analyze_ensemble(const Ensemble& ensemble, ModelId model, const AnalysisConfig& config,
                               const GenerationContext& context, unsigned jobs,
                               const std::string& run_config_json) {
  require_model(ensemble, model);
  const auto labels = record_labels(ensemble);
  ContextReport report;
  report.model = model;
  report.run_config_json = run_config_json;
  report.images = parallel_map(ensemble.size(), jobs, [&](std::size_t i) {
    const GrayImage img = load_checked(ensemble, i, model);
    ImageResult r;
    switch (model) {
      case ModelId::kAlphabet: r = analyze_alphabet_image(img, context.glyphs, config.alphabet); break;
      case ModelId::kVoronoi: r = analyze_voronoi_image(img, labels[i], config.voronoi); break;
      case ModelId::kFlag: r = analyze_flag_image(img, labels[i], context.patterns, config.flag); break;
      case ModelId::kExternal: break;
    }
    r.file = ensemble.manifest().records[i].file;
    return r;
  });
  switch (model) {
    case ModelId::kAlphabet: add_alphabet_aggregates(report); break;
    case ModelId::kVoronoi: add_voronoi_aggregates(report, config.voronoi); break;
    case ModelId::kFlag: add_flag_aggregates(report); break;
    case ModelId::kExternal: break;
  }
  if (ensemble.manifest().model == ModelId::kExternal) {
    report.notes.push_back("external image directory analyzed as model '" + std::string(to_string(model)) + "'");
  }
  report.compute_pass_rates();
  report.validate();
  return report;
}

ContextReport compare_ensembles(const Ensemble& train, const Ensemble& gen, const AnalysisConfig& config,
                                unsigned jobs, const std::string& run_config_json) {
  const auto features_of = [&](const Ensemble& e) {
    eval::LabeledFeatures lf;
    lf.features = parallel_map(e.size(), jobs, [&](std::size_t i) {
      const GrayImage img = load_checked(e, i, ModelId::kExternal);
      return eval::extract_features(img, config.compare.features);
    });
    lf.labels = record_labels(e);
    return lf;
  };
  const eval::LabeledFeatures tf = features_of(train);
  const eval::LabeledFeatures gf = features_of(gen);
  const eval::Comparison cmp = eval::compare_features(tf, gf, config.compare);

  ContextReport report;
  report.model = ModelId::kExternal;
  report.run_config_json = run_config_json;
  report.notes = cmp.notes;

  // train_pc / gen_pc hold the complete vectors in input order
  const auto add_images = [&](const Ensemble& e, const eval::LabeledFeatures& lf, const stats::RowMatrix& pc,
                              const std::string& prefix) {
    std::size_t row = 0;
    for (std::size_t i = 0; i < e.size(); ++i) {
      ImageResult r;
      r.file = prefix + e.manifest().records[i].file;
      r.values["fg_ratio"] = lf.features[i]["fg_ratio"];
      if (!lf.features[i].has_undefined() && row < pc.size()) {
        const auto& p = pc[row++];
        r.values["pc1"] = p.size() > 0 ? p[0] : kNaN;
        r.values["pc2"] = p.size() > 1 ? p[1] : kNaN;
      }
      if (lf.labels[i]) r.values["label"] = *lf.labels[i];
      report.images.push_back(std::move(r));
    }
  };
  add_images(train, tf, cmp.train_pc, "train/");
  add_images(gen, gf, cmp.gen_pc, "gen/");

  report.aggregates["ks.overall"] = cmp.overall_ks;
  for (const auto& [family, ks] : cmp.family_ks) report.aggregates["ks." + family] = ks;
  report.aggregates["train.used"] = static_cast<double>(cmp.train_used);
  report.aggregates["train.excluded"] = static_cast<double>(cmp.train_excluded);
  report.aggregates["gen.used"] = static_cast<double>(cmp.gen_used);
  report.aggregates["gen.excluded"] = static_cast<double>(cmp.gen_excluded);
  if (cmp.classes) {
    const auto& cm = *cmp.classes;
    for (std::size_t b = 0; b < cm.boundaries.size(); ++b) {
      report.aggregates[key("class.boundary.", static_cast<long long>(b))] = cm.boundaries[b];
    }
    for (int c : cm.classes) {
      const std::string base = key("class.", c);
      report.aggregates[base + ".prevalence"] = cm.prevalence.at(c);
      report.aggregates[base + ".coverage"] = cm.coverage.at(c).coverage;
      report.aggregates[base + ".density"] = cm.coverage.at(c).density;
    }
  }
  report.compute_pass_rates();
  report.validate();
  return report;
}

ContextReport compare_voronoi_context(const Ensemble& train, const Ensemble& gen, const AnalysisConfig& config,
                                      unsigned jobs, const std::string& run_config_json) {
  ContextReport report;
  report.model = ModelId::kVoronoi;
  report.run_config_json = run_config_json;

  struct Row {
    std::string file;
    std::optional<voronoi::ImplicitContextStats> stats;
  };
  const auto stats_of = [&](const Ensemble& e, const std::string& prefix) {
    return parallel_map(e.size(), jobs, [&](std::size_t i) {
      Row row{prefix + e.manifest().records[i].file, std::nullopt};
      const GrayImage img = load_checked(e, i, ModelId::kVoronoi);
      try {
        row.stats = voronoi::implicit_context(img, config.voronoi.extract);
      } catch (const AnalysisError&) {
      }
      return row;
    });
  };
  const auto train_rows = stats_of(train, "train/");
  const auto gen_rows = stats_of(gen, "gen/");

  std::vector<voronoi::ImplicitContextStats> ts;
  std::vector<voronoi::ImplicitContextStats> gs;
  for (const auto& r : train_rows) {
    if (r.stats) ts.push_back(*r.stats);
  }
  for (const auto& r : gen_rows) {
    if (r.stats) gs.push_back(*r.stats);
  }
  const std::size_t dropped = train_rows.size() + gen_rows.size() - ts.size() - gs.size();
  if (dropped > 0) report.notes.push_back(std::to_string(dropped) + " image(s) yielded no regions and were skipped");

  voronoi::ImplicitPca pca;
  try {
    pca = voronoi::implicit_context_pca(ts, gs);
  } catch (const std::invalid_argument& e) {
    throw AnalysisError(std::string("implicit-context comparison: ") + e.what());
  }

  const auto add_images = [&](const std::vector<Row>& rows, const stats::RowMatrix& proj) {
    std::size_t k = 0;
    for (const auto& r : rows) {
      ImageResult img;
      img.file = r.file;
      if (r.stats) {
        const auto& p = proj[k++];
        img.values["pc1"] = p.size() > 0 ? p[0] : kNaN;
        img.values["pc2"] = p.size() > 1 ? p[1] : kNaN;
        const auto v = r.stats->values();
        const auto& names = voronoi::ImplicitContextStats::names();
        for (std::size_t j = 0; j < v.size(); ++j) img.values[std::string("implicit.") + names[j]] = v[j];
      }
      report.images.push_back(std::move(img));
    }
  };
  add_images(train_rows, pca.train_projection);
  add_images(gen_rows, pca.test_projection);

  report.aggregates["ks.pc1"] = pca.ks[0];
  report.aggregates["ks.pc2"] = pca.ks[1];
  for (std::size_t i = 0; i < pca.model.k(); ++i) {
    report.aggregates[key("explained_ratio.pc", static_cast<long long>(i + 1))] = pca.model.explained_ratio(i);
  }
  report.aggregates["train.used"] = static_cast<double>(ts.size());
  report.aggregates["gen.used"] = static_cast<double>(gs.size());
  report.compute_pass_rates();
  report.validate();
  return report;
}

}  // namespace scmkit
