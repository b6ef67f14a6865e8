#include "scmkit/ensemble_eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

#include "scmkit/errors.hpp"
#include "scmkit/imgproc/morphology.hpp"
#include "scmkit/imgproc/skeleton_stats.hpp"
#include "scmkit/imgproc/thinning.hpp"
#include "scmkit/stats/hypothesis_tests.hpp"

namespace scmkit::eval {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

const FeatureVector& morphology_template() {
  static const FeatureVector t = [] {
    BinaryMask m(1, 1);
    m.set(0, 0, true);
    return imgproc::morphology_features(m);
  }();
  return t;
}

// Linear interpolation between order statistics; `v` must be sorted.
double quantile(const std::vector<double>& v, double q) {
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

bool is_zero(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; });
}

stats::RowMatrix select(const stats::RowMatrix& rows, const std::vector<std::size_t>& row_idx,
                        const std::vector<std::size_t>& cols) {
  stats::RowMatrix out;
  out.reserve(row_idx.size());
  for (std::size_t r : row_idx) {
    std::vector<double> row;
    row.reserve(cols.size());
    for (std::size_t c : cols) row.push_back(rows[r][c]);
    out.push_back(std::move(row));
  }
  return out;
}

std::vector<std::size_t> complete_rows(const stats::RowMatrix& rows, const std::vector<std::size_t>& cols) {
  std::vector<std::size_t> out;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (std::all_of(cols.begin(), cols.end(), [&](std::size_t c) { return std::isfinite(rows[r][c]); })) {
      out.push_back(r);
    }
  }
  return out;
}

}  // namespace

void TissueConfig::validate() const {
  std::set<std::string> names;
  for (const auto& t : tissues) {
    if (t.lo < 0 || t.hi > 255 || t.lo > t.hi) {
      throw ConfigError("tissue '" + t.name + "' needs 0 <= lo <= hi <= 255");
    }
    if (!names.insert(t.name).second) throw ConfigError("tissue '" + t.name + "' listed twice");
  }
  for (std::size_t i = 0; i < tissues.size(); ++i) {
    for (std::size_t j = i + 1; j < tissues.size(); ++j) {
      if (tissues[i].lo <= tissues[j].hi && tissues[j].lo <= tissues[i].hi) {
        throw ConfigError("tissue intervals '" + tissues[i].name + "' and '" + tissues[j].name + "' overlap");
      }
    }
  }
  for (const char* required : {"fat", "glandular", "ligament"}) {
    if (!names.count(required)) throw ConfigError(std::string("tissue config lacks '") + required + "'");
  }
}

TissueMasks segment_tissues(const GrayImage& image, const TissueConfig& config) {
  TissueMasks masks;
  for (const auto& t : config.tissues) {
    BinaryMask m(image.width(), image.height());
    for (int y = 0; y < image.height(); ++y) {
      for (int x = 0; x < image.width(); ++x) {
        const int v = image.at(x, y);
        if (v >= t.lo && v <= t.hi) m.set(x, y, true);
      }
    }
    masks.emplace(t.name, std::move(m));
  }
  return masks;
}

double fg_ratio(const TissueMasks& masks) {
  const auto fat = masks.find("fat");
  const auto gland = masks.find("glandular");
  if (fat == masks.end() || gland == masks.end()) throw AnalysisError("fg_ratio: fat or glandular mask missing");
  const std::size_t g = gland->second.count();
  if (g == 0) throw AnalysisError("fg_ratio: glandular mask is empty");
  return static_cast<double>(fat->second.count()) / static_cast<double>(g);
}

std::string family_of(const std::string& feature_name) {
  const auto dot = feature_name.find('.');
  return dot == std::string::npos ? feature_name : feature_name.substr(0, dot);
}

FeatureVector extract_features(const GrayImage& image, const FeatureOptions& options) {
  const TissueMasks masks = segment_tissues(image, options.tissues);
  FeatureVector out;
  out.append(imgproc::glcm_features(image, options.glcm), "texture.");

  const BinaryMask& gland = masks.at("glandular");
  if (gland.any()) {
    out.append(imgproc::morphology_features(gland), "morphology.");
  } else {
    for (const auto& name : morphology_template().names()) out.add("morphology." + name, kNaN);
  }

  out.append(imgproc::skeleton_statistics(imgproc::skeletonize(masks.at("ligament"))), "skeleton.");
  out.add("fg_ratio", gland.any() ? fg_ratio(masks) : kNaN);
  return out;
}

PairSimilarity pair_similarity_distributions(const stats::RowMatrix& train, const stats::RowMatrix& gen,
                                             std::size_t pairs, std::size_t k, RngStream& rng) {
  if (pairs < 100) throw std::invalid_argument("pair_similarity_distributions: need at least 100 pairs");
  if (train.size() < 2) throw std::invalid_argument("pair_similarity_distributions: need two training rows");
  if (gen.empty()) throw std::invalid_argument("pair_similarity_distributions: generated set is empty");
  const std::size_t d = train.front().size();
  const stats::PcaModel model = stats::pca_fit(train, std::min(k, d));
  const stats::RowMatrix pt = stats::pca_project_all(model, train);
  const stats::RowMatrix pg = stats::pca_project_all(model, gen);

  PairSimilarity out;
  out.components = model.k();
  const std::size_t budget = pairs * 100;
  std::size_t attempts = 0;
  while (out.train_train.size() < pairs) {
    if (++attempts > budget) throw AnalysisError("too many zero-length projections among training pairs");
    const auto i = static_cast<std::size_t>(rng.uniform_int(pt.size()));
    auto j = static_cast<std::size_t>(rng.uniform_int(pt.size() - 1));
    if (j >= i) ++j;
    if (is_zero(pt[i]) || is_zero(pt[j])) continue;
    out.train_train.push_back(stats::cosine_similarity(pt[i], pt[j]));
  }
  attempts = 0;
  while (out.train_gen.size() < pairs) {
    if (++attempts > budget) throw AnalysisError("too many zero-length projections among train-gen pairs");
    const auto i = static_cast<std::size_t>(rng.uniform_int(pt.size()));
    const auto j = static_cast<std::size_t>(rng.uniform_int(pg.size()));
    if (is_zero(pt[i]) || is_zero(pg[j])) continue;
    out.train_gen.push_back(stats::cosine_similarity(pt[i], pg[j]));
  }
  out.ks = stats::ks_two_sample(out.train_train, out.train_gen);
  return out;
}

ClassMetrics class_metrics(const stats::RowMatrix& train, const std::vector<int>& train_labels,
                           const std::vector<double>& train_fg, const stats::RowMatrix& gen,
                           const std::vector<double>& gen_fg, std::size_t k_neighbors) {
  if (train.size() != train_labels.size() || train.size() != train_fg.size() || gen.size() != gen_fg.size()) {
    throw std::invalid_argument("class_metrics: inconsistent input sizes");
  }
  if (gen.empty()) throw AnalysisError("class_metrics: generated set is empty");
  std::map<int, std::vector<double>> ratios;
  for (std::size_t i = 0; i < train.size(); ++i) ratios[train_labels[i]].push_back(train_fg[i]);
  if (ratios.size() < 4) {
    throw AnalysisError("class_metrics: need at least four labeled classes; got " + std::to_string(ratios.size()));
  }

  ClassMetrics out;
  std::vector<std::pair<double, int>> by_median;
  for (auto& [label, v] : ratios) {
    if (v.size() <= k_neighbors) {
      throw AnalysisError("class " + std::to_string(label) + " has too few training images for coverage");
    }
    std::sort(v.begin(), v.end());
    by_median.emplace_back(quantile(v, 0.5), label);
  }
  std::sort(by_median.begin(), by_median.end());
  for (const auto& [median, label] : by_median) out.classes.push_back(label);
  for (std::size_t c = 0; c + 1 < out.classes.size(); ++c) {
    const double upper_of_lower = quantile(ratios[out.classes[c]], 0.95);
    const double lower_of_upper = quantile(ratios[out.classes[c + 1]], 0.05);
    out.boundaries.push_back(0.5 * (upper_of_lower + lower_of_upper));
  }

  const stats::PcaModel model = stats::pca_fit(train, std::min<std::size_t>(2, train.front().size()));
  const stats::RowMatrix pt = stats::pca_project_all(model, train);
  const stats::RowMatrix pg = stats::pca_project_all(model, gen);

  std::map<int, stats::RowMatrix> fake;
  for (std::size_t j = 0; j < gen.size(); ++j) {
    const auto slot = static_cast<std::size_t>(
        std::upper_bound(out.boundaries.begin(), out.boundaries.end(), gen_fg[j]) - out.boundaries.begin());
    fake[out.classes[slot]].push_back(pg[j]);
  }
  for (int label : out.classes) {
    out.prevalence[label] = static_cast<double>(fake[label].size()) / static_cast<double>(gen.size());
    stats::RowMatrix real;
    for (std::size_t i = 0; i < train.size(); ++i) {
      if (train_labels[i] == label) real.push_back(pt[i]);
    }
    out.coverage[label] = fake[label].empty() ? stats::CoverageDensity{0.0, 0.0}
                                              : stats::coverage_density(real, fake[label], k_neighbors);
  }
  return out;
}

Comparison compare_features(const LabeledFeatures& train, const LabeledFeatures& gen,
                            const CompareOptions& options) {
  if (train.features.empty()) throw AnalysisError("training ensemble is empty");
  if (gen.features.empty()) throw AnalysisError("generated ensemble is empty");
  Comparison out;
  out.feature_names = train.features.front().names();
  const auto to_rows = [&](const std::vector<FeatureVector>& fv, const char* which) {
    stats::RowMatrix rows;
    for (const auto& f : fv) {
      if (f.names() != out.feature_names) throw AnalysisError(std::string(which) + " feature names differ");
      rows.push_back(f.values());
    }
    return rows;
  };
  const stats::RowMatrix tr = to_rows(train.features, "training");
  const stats::RowMatrix ge = to_rows(gen.features, "generated");

  std::vector<std::size_t> all_cols(out.feature_names.size());
  for (std::size_t c = 0; c < all_cols.size(); ++c) all_cols[c] = c;
  const auto tr_ok = complete_rows(tr, all_cols);
  const auto ge_ok = complete_rows(ge, all_cols);
  out.train_used = tr_ok.size();
  out.gen_used = ge_ok.size();
  out.train_excluded = tr.size() - tr_ok.size();
  out.gen_excluded = ge.size() - ge_ok.size();
  if (out.train_excluded + out.gen_excluded > 0) {
    out.notes.push_back("excluded images with undefined features: train " + std::to_string(out.train_excluded) +
                        ", gen " + std::to_string(out.gen_excluded));
  }

  const stats::RowMatrix trc = select(tr, tr_ok, all_cols);
  const stats::RowMatrix gec = select(ge, ge_ok, all_cols);
  out.overall_ks = kNaN;
  if (trc.size() >= 2 && !gec.empty()) {
    RngStream rng(options.seed, 0);
    try {
      out.overall_ks = pair_similarity_distributions(trc, gec, options.pairs, options.components, rng).ks;
    } catch (const std::invalid_argument& e) {
      out.notes.push_back(std::string("overall KS undefined: ") + e.what());
    }
    const stats::PcaModel pc = stats::pca_fit(trc, std::min<std::size_t>(2, trc.front().size()));
    out.train_pc = stats::pca_project_all(pc, trc);
    out.gen_pc = stats::pca_project_all(pc, gec);
  } else {
    out.notes.push_back("overall KS undefined: too few complete feature vectors");
  }

  const auto& families = feature_families();
  for (std::size_t f = 0; f < families.size(); ++f) {
    std::vector<std::size_t> cols;
    for (std::size_t c = 0; c < out.feature_names.size(); ++c) {
      if (family_of(out.feature_names[c]) == families[f]) cols.push_back(c);
    }
    double ks = kNaN;
    const auto a = select(tr, complete_rows(tr, cols), cols);
    const auto b = select(ge, complete_rows(ge, cols), cols);
    if (cols.empty() || a.size() < 2 || b.empty()) {
      out.notes.push_back(families[f] + " KS undefined: too few complete values");
    } else if (cols.size() == 1) {
      std::vector<double> va, vb;
      for (const auto& r : a) va.push_back(r[0]);
      for (const auto& r : b) vb.push_back(r[0]);
      ks = stats::ks_two_sample(va, vb);
    } else {
      RngStream rng(options.seed, 1 + f);
      try {
        ks = pair_similarity_distributions(a, b, options.pairs, options.components, rng).ks;
      } catch (const std::exception& e) {
        out.notes.push_back(families[f] + " KS undefined: " + e.what());
      }
    }
    out.family_ks[families[f]] = ks;
  }

  std::vector<int> labels;
  bool labeled = !tr_ok.empty();
  for (std::size_t i : tr_ok) {
    if (i >= train.labels.size() || !train.labels[i]) {
      labeled = false;
      break;
    }
    labels.push_back(*train.labels[i]);
  }
  if (!labeled) {
    out.notes.push_back("class metrics skipped: training images are unlabeled");
  } else if (!gec.empty()) {
    const auto fg_col = static_cast<std::size_t>(
        std::find(out.feature_names.begin(), out.feature_names.end(), "fg_ratio") - out.feature_names.begin());
    if (fg_col == out.feature_names.size()) throw AnalysisError("feature set lacks fg_ratio");
    std::vector<double> tfg, gfg;
    for (const auto& r : trc) tfg.push_back(r[fg_col]);
    for (const auto& r : gec) gfg.push_back(r[fg_col]);
    try {
      out.classes = class_metrics(trc, labels, tfg, gec, gfg, options.k_neighbors);
      out.notes.push_back("class prevalence assigned by F/G-ratio thresholds fit on labeled training data");
    } catch (const AnalysisError& e) {
      out.notes.push_back(std::string("class metrics skipped: ") + e.what());
    }
  }
  return out;
}

}  // namespace scmkit::eval
