#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "phantom.hpp"
#include "scmkit/analyzers.hpp"
#include "scmkit/errors.hpp"
#include "scmkit/plots.hpp"

using namespace scmkit;
using fixture::TempDir;

namespace {

const GenerationContext& ctx() {
  static const GenerationContext c;
  return c;
}

void gen(ModelId model, std::size_t n, std::uint64_t seed, const std::filesystem::path& dir) {
  GenerateRequest req;
  req.model = model;
  req.count = n;
  req.seed = seed;
  req.mix = parse_class_mix(model, "");
  generate_ensemble(req, ctx(), dir);
}

std::set<std::string> failing(const ContextReport& r, const std::string& check) {
  std::set<std::string> out;
  for (const auto& img : r.images) {
    const auto it = img.checks.find(check);
    if (it != img.checks.end() && !it->second.pass) out.insert(img.file);
  }
  return out;
}

std::set<std::string> corrupted(const Ensemble& e) {
  std::set<std::string> out;
  for (const auto& r : e.manifest().records) {
    if (r.corruption) out.insert(r.file);
  }
  return out;
}

}  // namespace

TEST(AnalyzeAlphabet, CleanAndCorrupted) {
  TempDir in("aa_in"), out("aa_out");
  gen(ModelId::kAlphabet, 40, 1, in.path());
  const AnalysisConfig cfg;
  const auto clean = analyze_ensemble(load_ensemble(in.path()), ModelId::kAlphabet, cfg, ctx(), 1, "{}");
  EXPECT_DOUBLE_EQ(clean.aggregates.at("pass_rate.pair_prevalence"), 1.0);
  EXPECT_DOUBLE_EQ(clean.aggregates.at("pass_rate.recognized"), 1.0);
  EXPECT_DOUBLE_EQ(clean.aggregates.at("pass_rate.letter_prevalence_exact"), 1.0);

  corrupt_ensemble(load_ensemble(in.path()), {"pair_break", 0.1, 3, 1}, ctx(), out.path());
  const Ensemble bad = load_ensemble(out.path());
  const auto r = analyze_ensemble(bad, ModelId::kAlphabet, cfg, ctx(), 2, "{}");
  EXPECT_DOUBLE_EQ(r.aggregates.at("pass_rate.pair_prevalence"), 0.9);
  EXPECT_EQ(failing(r, "pair_prevalence"), corrupted(bad));
}

TEST(AnalyzeVoronoi, CleanEnsemblePasses) {
  TempDir in("av_in");
  gen(ModelId::kVoronoi, 16, 2, in.path());
  const auto r = analyze_ensemble(load_ensemble(in.path()), ModelId::kVoronoi, AnalysisConfig{}, ctx(), 1, "{}");
  EXPECT_DOUBLE_EQ(r.aggregates.at("pass_rate.region_class"), 1.0);
  EXPECT_DOUBLE_EQ(r.aggregates.at("pass_rate.class_match"), 1.0);
  EXPECT_GE(r.aggregates.at("pass_rate.rank_correlation"), 0.9);
  EXPECT_EQ(r.aggregates.at("off_class_images"), 0.0);
  for (const auto& img : r.images) EXPECT_TRUE(img.values.contains("implicit.junction_count"));
}

TEST(AnalyzeVoronoi, RegionCountCorruptionIsCaught) {
  TempDir in("avc_in"), out("avc_out");
  gen(ModelId::kVoronoi, 12, 3, in.path());
  corrupt_ensemble(load_ensemble(in.path()), {"region_count", 0.25, 1, 1}, ctx(), out.path());
  const Ensemble bad = load_ensemble(out.path());
  const auto r = analyze_ensemble(bad, ModelId::kVoronoi, AnalysisConfig{}, ctx(), 1, "{}");
  EXPECT_EQ(failing(r, "class_match"), corrupted(bad));
}

TEST(AnalyzeFlag, ForbiddenTileDetectionIsExact) {
  TempDir in("af_in"), out("af_out");
  gen(ModelId::kFlag, 40, 4, in.path());
  corrupt_ensemble(load_ensemble(in.path()), {"forbidden_tile", 0.2, 9, 1}, ctx(), out.path());
  const Ensemble bad = load_ensemble(out.path());
  const auto r = analyze_ensemble(bad, ModelId::kFlag, AnalysisConfig{}, ctx(), 1, "{}");
  EXPECT_EQ(failing(r, "forbidden"), corrupted(bad));
  EXPECT_EQ(corrupted(bad).size(), 8u);
  EXPECT_EQ(r.aggregates.at("forbidden_images"), 8.0);
  EXPECT_TRUE(r.aggregates.contains("moran_tile_rejection_rate"));
}

TEST(AnalyzeFlag, LabelOnlyFeedsClassMatch) {
  RngStream rng(1, 0);
  const auto f = flag::generate_flag(rng, 2, ctx().patterns);
  const auto right = analyze_flag_image(f.image, 2, ctx().patterns, FlagAnalysisConfig{});
  const auto wrong = analyze_flag_image(f.image, 5, ctx().patterns, FlagAnalysisConfig{});
  EXPECT_TRUE(right.checks.at("class_match").pass);
  EXPECT_FALSE(wrong.checks.at("class_match").pass);
  EXPECT_EQ(right.checks.at("pattern"), wrong.checks.at("pattern"));
  EXPECT_EQ(right.values.at("class"), 2.0);
  EXPECT_FALSE(analyze_flag_image(f.image, std::nullopt, ctx().patterns, {}).checks.contains("class_match"));
}

TEST(Analyze, ModelMismatchAndShape) {
  TempDir in("am_in");
  gen(ModelId::kAlphabet, 2, 1, in.path());
  EXPECT_THROW(analyze_ensemble(load_ensemble(in.path()), ModelId::kFlag, AnalysisConfig{}, ctx(), 1, "{}"),
               ConfigError);
  EXPECT_THROW(analyze_ensemble(load_ensemble(in.path()), ModelId::kExternal, AnalysisConfig{}, ctx(), 1, "{}"),
               ConfigError);

  TempDir ext("am_ext");
  fixture::write_phantom_ensemble(ext.path(), 1, 1, 128);
  EXPECT_THROW(analyze_ensemble(open_image_directory(ext.path()), ModelId::kAlphabet, AnalysisConfig{}, ctx(), 1,
                                "{}"),
               IoError);
}

TEST(Analyze, ReportIsDeterministicAcrossJobs) {
  TempDir in("ad_in");
  gen(ModelId::kFlag, 6, 5, in.path());
  const Ensemble e = load_ensemble(in.path());
  const auto a = analyze_ensemble(e, ModelId::kFlag, AnalysisConfig{}, ctx(), 1, "{\"x\":1}");
  const auto b = analyze_ensemble(e, ModelId::kFlag, AnalysisConfig{}, ctx(), 3, "{\"x\":1}");
  EXPECT_EQ(serialize_report(a), serialize_report(b));
  EXPECT_EQ(parse_report(serialize_report(a)), a);
  EXPECT_NO_THROW(a.validate());
}

TEST(Compare, PhantomEnsembles) {
  TempDir a("cp_a"), b("cp_b");
  fixture::write_phantom_ensemble(a.path(), 10, 1, 96);
  fixture::write_phantom_ensemble(b.path(), 10, 2, 96);
  AnalysisConfig cfg;
  cfg.compare.pairs = 1000;
  const auto r = compare_ensembles(open_image_directory(a.path()), open_image_directory(b.path()), cfg, 1, "{}");
  EXPECT_EQ(r.model, ModelId::kExternal);
  for (const auto& fam : eval::feature_families()) EXPECT_TRUE(r.aggregates.contains("ks." + fam)) << fam;
  EXPECT_TRUE(r.aggregates.contains("ks.overall"));
  EXPECT_TRUE(r.aggregates.contains("class.0.coverage"));
  EXPECT_EQ(r.images.size(), 80u);
  EXPECT_EQ(r.images.front().file.rfind("train/", 0), 0u);
}

TEST(Compare, VoronoiContext) {
  TempDir a("cv_a"), b("cv_b");
  gen(ModelId::kVoronoi, 60, 1, a.path());
  gen(ModelId::kVoronoi, 60, 2, b.path());
  const auto r =
      compare_voronoi_context(load_ensemble(a.path()), load_ensemble(b.path()), AnalysisConfig{}, 1, "{}");
  EXPECT_EQ(r.model, ModelId::kVoronoi);
  EXPECT_TRUE(r.aggregates.contains("ks.pc1"));
  EXPECT_TRUE(r.aggregates.contains("ks.pc2"));
  EXPECT_EQ(r.aggregates.at("train.used"), 60.0);
  TempDir c("cv_c");
  gen(ModelId::kVoronoi, 20, 3, c.path());
  EXPECT_THROW(compare_voronoi_context(load_ensemble(c.path()), load_ensemble(b.path()), AnalysisConfig{}, 1, "{}"),
               AnalysisError);
}

TEST(Plots, DeterministicAndPlaceholders) {
  TempDir in("pl_in");
  gen(ModelId::kVoronoi, 8, 6, in.path());
  auto r = analyze_ensemble(load_ensemble(in.path()), ModelId::kVoronoi, AnalysisConfig{}, ctx(), 1, "{}");
  const auto p1 = render_plots(r);
  EXPECT_EQ(p1, render_plots(r));
  ASSERT_TRUE(p1.contains("region_count_hist.svg"));
  EXPECT_EQ(p1.at("region_count_hist.svg").rfind("<svg", 0), 0u);

  // an off-class count gets the second colour
  r.images[0].checks["region_class"].statistic = 40;
  r.images[0].values["region_count"] = 40;
  EXPECT_NE(render_plots(r).at("region_count_hist.svg"), p1.at("region_count_hist.svg"));

  ContextReport empty;
  empty.model = ModelId::kAlphabet;
  const auto ph = render_plots(empty);
  ASSERT_TRUE(ph.contains("pair_prevalence.svg"));
  EXPECT_NE(ph.at("pair_prevalence.svg").find("no data"), std::string::npos);
}
