// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "oracles.hpp"
#include "phantom.hpp"
#include "scmkit/analyzers.hpp"
#include "scmkit/generation.hpp"
#include "scmkit/stats/hypothesis_tests.hpp"
#include "scmkit/stats/neighbors.hpp"

using namespace scmkit;
namespace fs = std::filesystem;
using fixture::TempDir;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

const GenerationContext& ctx() {
  static const GenerationContext c;
  return c;
}

void generate(ModelId model, std::size_t n, std::uint64_t seed, const fs::path& dir, unsigned jobs) {
  GenerateRequest req;
  req.model = model;
  req.count = n;
  req.seed = seed;
  req.mix = parse_class_mix(model, "");
  req.jobs = jobs;
  generate_ensemble(req, ctx(), dir);
}

double fraction(const ContextReport& r, const std::function<bool(const ImageResult&)>& pred) {
  if (r.images.empty()) return 0.0;
  std::size_t n = 0;
  for (const auto& img : r.images) n += pred(img);
  return static_cast<double>(n) / static_cast<double>(r.images.size());
}

bool check_passes(const ImageResult& img, const std::string& name) {
  const auto it = img.checks.find(name);
  return it != img.checks.end() && it->second.pass;
}

std::set<std::string> failing(const ContextReport& r, const std::string& check) {
  std::set<std::string> out;
  for (const auto& img : r.images) {
    if (!check_passes(img, check)) out.insert(img.file);
  }
  return out;
}

std::set<std::string> corrupted(const Ensemble& e) {
  std::set<std::string> out;
  for (const auto& rec : e.manifest().records) {
    if (rec.corruption) out.insert(rec.file);
  }
  return out;
}

// Shared state between related criteria.
struct Workspace {
  TempDir root{"acceptance"};
  std::optional<ContextReport> voronoi_report;
  std::optional<ContextReport> flag_report;
};

// 1 ------------------------------------------------------------------------
Outcome alphabet_round_trip(Workspace& ws) {
  const auto t0 = std::chrono::steady_clock::now();
  generate(ModelId::kAlphabet, 1000, 101, ws.root / "alphabet", 1);
  const auto r = analyze_ensemble(load_ensemble(ws.root / "alphabet"), ModelId::kAlphabet, AnalysisConfig{}, ctx(),
                                  1, "{}");
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  const double recognized = fraction(r, [](const ImageResult& i) { return i.checks.at("recognized").statistic == 0; });
  const double exact = fraction(r, [](const ImageResult& i) {
    return check_passes(i, "letter_prevalence_exact") && i.checks.at("letter_prevalence").statistic == 0.0;
  });
  const double pairs = fraction(r, [](const ImageResult& i) {
    return check_passes(i, "pair_prevalence") && i.values.at("pairs.X-Y") == 8 && i.values.at("pairs.Z-K") == 2 &&
           i.values.at("pairs.Z-V") == 1 && i.values.at("pairs.Z-W") == 1;
  });
  std::ostringstream d;
  d << "recognized " << recognized << ", exact prevalence " << exact << ", pairs (8,2,1,1) " << pairs << ", "
    << fmt("%.1f", seconds) << " s";
  return {r.images.size() == 1000 && recognized == 1.0 && exact == 1.0 && pairs == 1.0 && seconds < 120.0, d.str()};
}

// 2 ------------------------------------------------------------------------
Outcome alphabet_sensitivity(Workspace& ws) {
  const Ensemble clean = load_ensemble(ws.root / "alphabet");
  bool ok = true;
  std::ostringstream d;
  for (double p : {0.05, 0.1}) {
    const fs::path dir = ws.root / ("alphabet_p" + fmt("%.2f", p));
    corrupt_ensemble(clean, {"pair_break", p, 7, 0}, ctx(), dir);
    const Ensemble bad = load_ensemble(dir);
    const auto r = analyze_ensemble(bad, ModelId::kAlphabet, AnalysisConfig{}, ctx(), 0, "{}");
    const auto fails = failing(r, "pair_prevalence");
    const double rate = static_cast<double>(fails.size()) / static_cast<double>(r.images.size());
    const bool same = fails == corrupted(bad);
    ok = ok && same && fails.size() == static_cast<std::size_t>(std::llround(p * 1000));
    d << "p=" << p << ": violation rate " << rate << (same ? " (exact image set)" : " (image set differs)") << "; ";
  }
  return {ok, d.str()};
}

// 3 ------------------------------------------------------------------------
Outcome voronoi_round_trip(Workspace& ws) {
  generate(ModelId::kVoronoi, 4000, 303, ws.root / "voronoi", 0);
  ws.voronoi_report =
      analyze_ensemble(load_ensemble(ws.root / "voronoi"), ModelId::kVoronoi, AnalysisConfig{}, ctx(), 0, "{}");
  const auto& r = *ws.voronoi_report;
  const double within = fraction(r, [](const ImageResult& i) { return i.checks.at("class_match").statistic <= 1; });
  const double rho = fraction(r, [](const ImageResult& i) {
    const double s = i.checks.at("rank_correlation").statistic;
    return std::isfinite(s) && s >= 0.99;
  });
  const bool gof = r.aggregates.at("class_gof.pass") == 1.0;
  std::ostringstream d;
  d << "count within 1: " << within << ", rho >= 0.99: " << rho << ", class GOF chi2 "
    << fmt("%.3f", r.aggregates.at("class_gof.statistic")) << " vs "
    << fmt("%.3f", r.aggregates.at("class_gof.critical_value"));
  return {r.images.size() == 4000 && within >= 0.99 && rho >= 0.99 && gof, d.str()};
}

// 4 ------------------------------------------------------------------------
Outcome voronoi_implicit_null(Workspace& ws) {
  if (!ws.voronoi_report) return {false, "criterion 3 produced no report"};
  const auto& names = voronoi::ImplicitContextStats::names();
  std::vector<voronoi::ImplicitContextStats> all;
  for (const auto& img : ws.voronoi_report->images) {
    std::vector<double> v;
    for (const char* n : names) v.push_back(img.values.at(std::string("implicit.") + n));
    voronoi::ImplicitContextStats s;
    s.region_count = v[0];
    s.junction_count = v[1];
    s.junction_density = v[2];
    s.edge_length_mean = v[3];
    s.edge_length_std = v[4];
    s.area_mean = v[5];
    s.area_std = v[6];
    if (s.values() != v) return {false, "implicit statistic layout changed"};
    all.push_back(s);
  }
  const std::size_t half = all.size() / 2;
  const auto pca = voronoi::implicit_context_pca(std::span(all).first(half), std::span(all).subspan(half));
  std::ostringstream d;
  d << half << " vs " << all.size() - half << ": KS pc1 " << fmt("%.4f", pca.ks[0]) << ", pc2 "
    << fmt("%.4f", pca.ks[1]);
  return {half == 2000 && pca.ks[0] < 0.05 && pca.ks[1] < 0.05, d.str()};
}

// 5 ------------------------------------------------------------------------
GrayImage blur_tiles(const GrayImage& img) {
  using namespace flag;
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

Outcome flag_calibration(Workspace& ws) {
  using namespace flag;
  generate(ModelId::kFlag, 2000, 505, ws.root / "flag", 0);
  const Ensemble e = load_ensemble(ws.root / "flag");
  ws.flag_report = analyze_ensemble(e, ModelId::kFlag, AnalysisConfig{}, ctx(), 0, "{}");
  const auto& r = *ws.flag_report;
  const double accuracy = fraction(
      r, [](const ImageResult& i) { return check_passes(i, "class_match") && i.checks.at("pattern").statistic == 0; });
  const double fg = r.aggregates.at("pass_rate.intensity_fg");
  const double bg = r.aggregates.at("pass_rate.intensity_bg");
  const double moran = r.aggregates.at("moran_tile_rejection_rate");

  // sensitivity on the first 500 images
  const std::size_t probe = 500;
  RngStream rng(image_seed(505, 99), 3);
  std::size_t uniform_fail = 0, blurred_pass = 0, blurred_tiles = 0;
  for (std::size_t i = 0; i < probe; ++i) {
    const GrayImage img = e.image(i);
    const auto label = e.manifest().records[i].label;
    GrayImage uni = img;
    const TileMap roles = ctx().patterns.masks[*label];
    for (int y = 0; y < kImageSize; ++y) {
      for (int x = 0; x < kImageSize; ++x) {
        if (roles.test((y / kTilePixels) * kTilesPerSide + x / kTilePixels)) {
          uni.at(x, y) = static_cast<std::uint8_t>(96 + rng.uniform_int(153));
        }
      }
    }
    uniform_fail += !analyze_flag_image(uni, label, ctx().patterns, FlagAnalysisConfig{}).checks.at("intensity_fg").pass;
    for (const auto& t : check_tile_texture(blur_tiles(img)).tiles) {
      blurred_pass += t.pass;
      ++blurred_tiles;
    }
  }
  const double uni_rate = static_cast<double>(uniform_fail) / probe;
  const double blur_rate = static_cast<double>(blurred_pass) / static_cast<double>(blurred_tiles);

  std::ostringstream d;
  d << "accuracy " << accuracy << ", FG GOF pass " << fg << ", BG GOF pass " << bg << ", Moran rejection "
    << fmt("%.4f", moran) << ", uniform-FG fail " << uni_rate << ", blurred Moran pass " << fmt("%.4f", blur_rate);
  const bool ok = accuracy >= 0.999 && std::abs(fg - 0.95) <= 0.02 && std::abs(bg - 0.95) <= 0.02 &&
                  std::abs(moran - 0.05) <= 0.015 && uni_rate > 0.99 && blur_rate < 0.05;
  return {ok, d.str()};
}

// 6 ------------------------------------------------------------------------
Outcome flag_forbidden(Workspace& ws) {
  const fs::path dir = ws.root / "flag_forbidden";
  corrupt_ensemble(load_ensemble(ws.root / "flag"), {"forbidden_tile", 0.25, 17, 0}, ctx(), dir);
  const Ensemble bad = load_ensemble(dir);
  const auto r = analyze_ensemble(bad, ModelId::kFlag, AnalysisConfig{}, ctx(), 0, "{}");
  const auto flagged = failing(r, "forbidden");
  const auto truth = corrupted(bad);
  std::size_t hit = 0;
  for (const auto& f : flagged) hit += truth.contains(f);
  const double precision = flagged.empty() ? 0.0 : static_cast<double>(hit) / flagged.size();
  const double recall = truth.empty() ? 0.0 : static_cast<double>(hit) / truth.size();
  std::ostringstream d;
  d << truth.size() << " corrupted of " << bad.size() << ", precision " << precision << ", recall " << recall;
  return {precision == 1.0 && recall == 1.0, d.str()};
}

// 7 ------------------------------------------------------------------------
void write_variant(const Ensemble& src, const fs::path& dir, const std::vector<std::size_t>& pick, bool halve) {
  EnsembleManifest m;
  m.model = ModelId::kExternal;
  for (std::size_t j = 0; j < pick.size(); ++j) {
    ManifestRecord rec;
    rec.file = image_file_name(j);
    rec.label = src.manifest().records[pick[j]].label;
    m.records.push_back(rec);
  }
  save_ensemble(
      m,
      [&](std::size_t j) {
        GrayImage img = src.image(pick[j]);
        return halve ? fixture::halve_intensity(img) : img;
      },
      dir, 0);
}

Outcome ensemble_eval(Workspace& ws) {
  const fs::path train_dir = ws.root / "phantom_train";
  fixture::write_phantom_ensemble(train_dir, 100, 707, 128);
  const Ensemble train = open_image_directory(train_dir);

  std::vector<std::size_t> identity(train.size()), boot(train.size());
  std::iota(identity.begin(), identity.end(), std::size_t{0});
  RngStream rng(707, 5);
  for (auto& b : boot) b = rng.uniform_int(train.size());
  write_variant(train, ws.root / "phantom_boot", boot, false);
  write_variant(train, ws.root / "phantom_half", identity, true);

  AnalysisConfig cfg;
  cfg.compare.pairs = 10000;
  const auto null = compare_ensembles(train, open_image_directory(ws.root / "phantom_boot"), cfg, 0, "{}");
  const auto halved = compare_ensembles(train, open_image_directory(ws.root / "phantom_half"), cfg, 0, "{}");
  const auto self = compare_ensembles(train, train, cfg, 0, "{}");

  const double ks_null = null.aggregates.at("ks.overall");
  const double ks_tex = halved.aggregates.at("ks.texture");
  bool ok = ks_null < 0.05 && ks_tex > 0.2;
  std::ostringstream d;
  d << "resample overall KS " << fmt("%.4f", ks_null) << ", halved texture KS " << fmt("%.4f", ks_tex)
    << "; self coverage/density:";
  for (int c = 0; c < fixture::kPhantomClasses; ++c) {
    const std::string key = "class." + std::to_string(c);
    const auto cov = self.aggregates.find(key + ".coverage");
    const auto den = self.aggregates.find(key + ".density");
    if (cov == self.aggregates.end() || den == self.aggregates.end()) {
      ok = false;
      d << " class " << c << " missing";
      continue;
    }
    ok = ok && cov->second >= 0.98 && den->second >= 0.9 && den->second <= 1.1;
    d << " " << c << ":" << fmt("%.3f", cov->second) << "/" << fmt("%.3f", den->second);
  }
  return {ok, d.str()};
}

// 8 ------------------------------------------------------------------------
Outcome kernel_oracles(Workspace&) {
  constexpr int kInstances = 200;
  RngStream rng(808, 0);
  std::map<std::string, int> mismatches;
  const auto check = [&](const std::string& name, double a, double b) {
    if (!oracle::close(a, b, 1e-9)) ++mismatches[name];
  };
  const auto draw = [&](std::size_t n, int levels) {
    std::vector<double> v(n);
    for (auto& x : v) x = levels > 0 ? static_cast<double>(rng.uniform_int(levels)) : rng.normal() * 3.0;
    return v;
  };

  for (int t = 0; t < kInstances; ++t) {
    // chi-squared
    const std::size_t k = 2 + rng.uniform_int(10);
    std::vector<double> obs(k), exp(k);
    for (std::size_t i = 0; i < k; ++i) {
      obs[i] = static_cast<double>(rng.uniform_int(50));
      exp[i] = 1.0 + rng.uniform() * 40.0;
    }
    const auto g = stats::chi2_gof(obs, exp, 0.05);
    check("chi2_gof", g.statistic, oracle::chi2_statistic(obs, exp));
    check("chi2_gof", g.critical_value, oracle::chi2_critical(0.05, static_cast<double>(k - 1)));

    // spearman with ties on half the instances
    const std::size_t n = 3 + rng.uniform_int(30);
    const int levels = t % 2 ? 5 : 0;
    const auto x = draw(n, levels), y = draw(n, levels);
    const auto rho = stats::spearman_rho(x, y);
    const double want = oracle::spearman(x, y);
    if (rho.has_value() != !std::isnan(want)) {
      ++mismatches["spearman_rho"];
    } else if (rho) {
      check("spearman_rho", *rho, want);
    }

    // KS
    const auto a = draw(1 + rng.uniform_int(40), levels), b = draw(1 + rng.uniform_int(40), levels);
    check("ks_two_sample", stats::ks_two_sample(a, b), oracle::ks(a, b));

    // Moran
    const int w = 2 + static_cast<int>(rng.uniform_int(7)), h = 2 + static_cast<int>(rng.uniform_int(7));
    auto field = draw(static_cast<std::size_t>(w * h), t % 3 ? 0 : 4);
    if (std::all_of(field.begin(), field.end(), [&](double v) { return v == field[0]; })) field[0] += 1.0;
    const bool queen = t % 2 == 0;
    const auto m = stats::morans_i(field, w, h, queen ? stats::Adjacency::kQueen : stats::Adjacency::kRook, 0.05);
    const auto mo = oracle::morans_i(field, w, h, queen, 0.05);
    check("morans_i", m.i, mo.i);
    check("morans_i", m.expected, mo.expected);
    check("morans_i", m.z_score, mo.z);
    if (m.pass != mo.pass) ++mismatches["morans_i"];

    // coverage / density
    const std::size_t kn = 1 + rng.uniform_int(5);
    const std::size_t dim = 1 + rng.uniform_int(4);
    const std::size_t nr = kn + 2 + rng.uniform_int(30), nf = 1 + rng.uniform_int(30);
    stats::RowMatrix real(nr, std::vector<double>(dim)), fake(nf, std::vector<double>(dim));
    for (auto& row : real) {
      for (auto& v : row) v = rng.normal();
    }
    for (auto& row : fake) {
      for (auto& v : row) v = rng.normal() + 0.3;
    }
    const auto cd = stats::coverage_density(real, fake, kn);
    const auto co = oracle::coverage_density(real, fake, kn);
    check("coverage_density", cd.coverage, co.coverage);
    check("coverage_density", cd.density, co.density);
  }

  int total = 0;
  std::ostringstream d;
  d << kInstances << " instances per kernel";
  for (const char* n : {"chi2_gof", "spearman_rho", "ks_two_sample", "morans_i", "coverage_density"}) {
    const auto it = mismatches.find(n);
    const int count = it == mismatches.end() ? 0 : it->second;
    total += count;
    d << ", " << n << " mismatches " << count;
  }
  return {total == 0, d.str()};
}

// 9 ------------------------------------------------------------------------
int cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  if (code != 0) std::cerr << "  scmkit " << args.front() << " failed: " << err.str();
  return code;
}

bool cli_pipeline(const fs::path& dir, const std::string& jobs) {
  // relative paths: RunConfig records the input paths as given
  const fs::path cwd = fs::current_path();
  fs::current_path(dir);
  bool ok = true;
  for (const char* model : {"alphabet", "voronoi", "flag"}) {
    const std::string m = model;
    ok = ok && cli({"generate", "--model", m, "--count", "60", "--seed", "9", "--out", m, "--jobs", jobs}) == 0;
    ok = ok && cli({"analyze", "--model", m, "--in", m, "--out", "reports/" + m + ".json", "--jobs", jobs}) == 0;
    ok = ok && cli({"report", "--in", "reports/" + m + ".json", "--out", "plots/" + m}) == 0;
  }
  ok = ok && cli({"generate", "--model", "voronoi", "--count", "60", "--seed", "10", "--out", "voronoi_b"}) == 0;
  ok = ok && cli({"corrupt", "--in", "flag", "--kind", "tile_move", "--rate", "0.2", "--seed", "3", "--out",
                  "flag_bad", "--jobs", jobs}) == 0;
  ok = ok && cli({"compare", "--model", "voronoi", "--train", "voronoi", "--gen", "voronoi_b", "--out",
                  "reports/implicit.json", "--jobs", jobs}) == 0;
  fixture::write_phantom_ensemble("phantom_a", 15, 1, 96);
  fixture::write_phantom_ensemble("phantom_b", 15, 2, 96);
  ok = ok && cli({"compare", "--train", "phantom_a", "--gen", "phantom_b", "--out", "reports/features.json",
                  "--jobs", jobs}) == 0;
  ok = ok && cli({"report", "--in", "reports/features.json", "--out", "plots/features"}) == 0;
  fs::current_path(cwd);
  return ok;
}

Outcome determinism(Workspace& ws) {
  const fs::path a = ws.root / "cli_a", b = ws.root / "cli_b";
  fs::create_directories(a);
  fs::create_directories(b);
  const bool ran = cli_pipeline(a, "1") && cli_pipeline(b, "0");
  const bool same = ran && fixture::same_tree(a, b);
  std::size_t files = 0;
  for (const auto& entry : fs::recursive_directory_iterator(a)) files += entry.is_regular_file();
  std::ostringstream d;
  d << (ran ? "" : "a command failed; ") << files << " files compared across two runs (jobs 1 vs all cores): "
    << (same ? "byte-identical" : "differ");
  return {same, d.str()};
}

}  // namespace

int main(int argc, char** argv) {
  // optional arguments: criterion numbers to run (default all)
  std::set<std::size_t> only;
  for (int i = 1; i < argc; ++i) only.insert(std::stoul(argv[i]));
  Workspace ws;
  const std::vector<std::pair<const char*, Outcome (*)(Workspace&)>> criteria = {
      {"alphabet round trip", alphabet_round_trip},
      {"alphabet pair-break sensitivity", alphabet_sensitivity},
      {"voronoi round trip", voronoi_round_trip},
      {"voronoi implicit-context null", voronoi_implicit_null},
      {"flag calibration", flag_calibration},
      {"flag forbidden-tile detection", flag_forbidden},
      {"ensemble-eval null and sensitivity", ensemble_eval},
      {"statistical kernel oracles", kernel_oracles},
      {"CLI determinism", determinism},
  };
  int failed = 0;
  std::size_t ran = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (!only.empty() && !only.contains(i + 1)) continue;
    ++ran;
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      o = criteria[i].second(ws);
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    failed += !o.pass;
    std::cout << "Criterion " << i + 1 << " " << (o.pass ? "PASS" : "FAIL") << " [" << criteria[i].first << "] "
              << o.detail << " (" << fmt("%.1f", s) << " s)" << std::endl;
  }
  std::cout << (failed ? "FAILED " : "ALL PASSED ") << ran - failed << "/" << ran << std::endl;
  return failed ? 1 : 0;
}
