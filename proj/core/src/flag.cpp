#include "scmkit/flag.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "scmkit/errors.hpp"
#include "scmkit/stats/sampling.hpp"
#include "scmkit/stats/special_functions.hpp"

namespace scmkit::flag {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

void check_class(int cls) {
  if (cls < 0 || cls >= kClassCount) {
    throw std::invalid_argument("flag class must be in 0..7; got " + std::to_string(cls));
  }
}

}  // namespace

void PatternSpec::validate() const {
  if (static_cast<int>(forbidden.size()) != kForbiddenCount) {
    throw ConfigError("pattern spec needs 24 forbidden tiles; got " + std::to_string(forbidden.size()));
  }
  TileMap forbidden_map;
  for (int t : forbidden) {
    if (t < 0 || t >= kTileCount) throw ConfigError("forbidden tile index out of range: " + std::to_string(t));
    if (forbidden_map.test(static_cast<std::size_t>(t))) {
      throw ConfigError("forbidden tile listed twice: " + std::to_string(t));
    }
    forbidden_map.set(static_cast<std::size_t>(t));
  }
  for (int c = 0; c < kClassCount; ++c) {
    const auto& m = masks[static_cast<std::size_t>(c)];
    if (static_cast<int>(m.count()) != kForegroundTiles) {
      throw ConfigError("class " + std::to_string(c) + " has " + std::to_string(m.count()) +
                        " foreground tiles; expected 80");
    }
    if ((m & forbidden_map).any()) {
      throw ConfigError("class " + std::to_string(c) + " uses a forbidden tile as foreground");
    }
    for (int d = 0; d < c; ++d) {
      if ((m ^ masks[static_cast<std::size_t>(d)]).count() < 16) {
        throw ConfigError("classes " + std::to_string(d) + " and " + std::to_string(c) +
                          " differ in fewer than 16 tiles");
      }
    }
  }
}

bool PatternSpec::is_forbidden(int tile) const {
  return std::binary_search(forbidden.begin(), forbidden.end(), tile);
}

const PatternSpec& PatternSpec::default_spec() {
  static const PatternSpec spec = parse_pattern_spec(default_pattern_text(), "<builtin patterns>");
  return spec;
}

PatternSpec parse_pattern_spec(std::string_view text, const std::string& origin) {
  PatternSpec spec;
  std::array<int, kClassCount> rows_read{};
  std::array<bool, kClassCount> seen{};
  int current = -1;
  bool have_forbidden = false;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  const auto fail = [&](const std::string& msg) {
    throw ConfigError(origin + ":" + std::to_string(line_no) + ": " + msg);
  };
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = trim(raw.substr(0, raw.find('#')));
    if (line.empty()) continue;
    if (line.rfind("class", 0) == 0) {
      std::istringstream ls(line.substr(5));
      int c = -1;
      if (!(ls >> c) || c < 0 || c >= kClassCount) fail("bad class header");
      if (seen[static_cast<std::size_t>(c)]) fail("class " + std::to_string(c) + " defined twice");
      seen[static_cast<std::size_t>(c)] = true;
      std::string name;
      std::getline(ls, name);
      spec.names[static_cast<std::size_t>(c)] = trim(name);
      current = c;
    } else if (line.rfind("forbidden", 0) == 0) {
      if (have_forbidden) fail("forbidden list given twice");
      have_forbidden = true;
      std::istringstream ls(line.substr(9));
      std::string tok;
      while (ls >> tok) {
        try {
          std::size_t used = 0;
          const int t = std::stoi(tok, &used);
          if (used != tok.size()) throw std::invalid_argument(tok);
          spec.forbidden.push_back(t);
        } catch (const std::exception&) {
          fail("bad forbidden index '" + tok + "'");
        }
      }
      current = -1;
    } else {
      if (current < 0) fail("mask row outside a class block");
      int& r = rows_read[static_cast<std::size_t>(current)];
      if (r >= kTilesPerSide) fail("class " + std::to_string(current) + " has more than 16 rows");
      if (static_cast<int>(line.size()) != kTilesPerSide ||
          line.find_first_not_of("01") != std::string::npos) {
        fail("mask rows need 16 characters of 0/1");
      }
      for (int c = 0; c < kTilesPerSide; ++c) {
        spec.masks[static_cast<std::size_t>(current)].set(static_cast<std::size_t>(r * kTilesPerSide + c),
                                                          line[static_cast<std::size_t>(c)] == '1');
      }
      ++r;
    }
  }
  for (int c = 0; c < kClassCount; ++c) {
    if (!seen[static_cast<std::size_t>(c)] || rows_read[static_cast<std::size_t>(c)] != kTilesPerSide) {
      throw ConfigError(origin + ": class " + std::to_string(c) + " missing or incomplete");
    }
  }
  if (!have_forbidden) throw ConfigError(origin + ": missing forbidden list");
  std::sort(spec.forbidden.begin(), spec.forbidden.end());
  spec.validate();
  return spec;
}

PatternSpec load_pattern_spec(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open pattern file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_pattern_spec(buf.str(), path.string());
}

std::string serialize_pattern_spec(const PatternSpec& spec) {
  std::ostringstream out;
  for (int c = 0; c < kClassCount; ++c) {
    out << "class " << c;
    if (!spec.names[static_cast<std::size_t>(c)].empty()) out << ' ' << spec.names[static_cast<std::size_t>(c)];
    out << '\n';
    for (int r = 0; r < kTilesPerSide; ++r) {
      for (int col = 0; col < kTilesPerSide; ++col) {
        out << (spec.masks[static_cast<std::size_t>(c)].test(static_cast<std::size_t>(r * kTilesPerSide + col)) ? '1' : '0');
      }
      out << '\n';
    }
    out << '\n';
  }
  out << "forbidden";
  for (int t : spec.forbidden) out << ' ' << t;
  out << '\n';
  return out.str();
}

int IntensityLaw::draw(RngStream& rng) const {
  const double v = std::round(scale * stats::beta_variate(rng, a, b) + offset);
  return static_cast<int>(std::clamp(v, static_cast<double>(lo), static_cast<double>(hi)));
}

std::vector<double> IntensityLaw::lattice_probabilities() const {
  // P(round(scale * B + offset) = v) = F((v + 0.5 - offset) / scale) - F((v - 0.5 - offset) / scale);
  // clamping moves the tails onto lo and hi.
  const auto cdf = [&](double value) {
    const double x = (value - offset) / scale;
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    return stats::regularized_beta(x, a, b);
  };
  std::vector<double> p(static_cast<std::size_t>(hi - lo + 1));
  for (int v = lo; v <= hi; ++v) {
    const double lower = v == lo ? 0.0 : cdf(v - 0.5);
    const double upper = v == hi ? 1.0 : cdf(v + 0.5);
    p[static_cast<std::size_t>(v - lo)] = upper - lower;
  }
  return p;
}

GrayImage render_flag(RngStream& rng, const TileMap& roles, const FlagLaws& laws) {
  GrayImage img(kImageSize, kImageSize);
  for (int y = 0; y < kImageSize; ++y) {
    for (int x = 0; x < kImageSize; ++x) {
      const int tile = (y / kTilePixels) * kTilesPerSide + x / kTilePixels;
      const IntensityLaw& law = roles.test(static_cast<std::size_t>(tile)) ? laws.foreground : laws.background;
      img.at(x, y) = static_cast<std::uint8_t>(law.draw(rng));
    }
  }
  return img;
}

FlagSample generate_flag(RngStream& rng, int cls, const PatternSpec& spec, const FlagLaws& laws) {
  check_class(cls);
  FlagSample s;
  s.cls = cls;
  s.roles = spec.masks[static_cast<std::size_t>(cls)];
  s.image = render_flag(rng, s.roles, laws);
  return s;
}

TileMap infer_foreground(const GrayImage& image, double boundary) {
  if (image.width() != kImageSize || image.height() != kImageSize) {
    throw std::invalid_argument("infer_foreground: expected a 256x256 image");
  }
  TileMap map;
  for (int ty = 0; ty < kTilesPerSide; ++ty) {
    for (int tx = 0; tx < kTilesPerSide; ++tx) {
      int sum = 0;
      for (int y = 0; y < kTilePixels; ++y) {
        for (int x = 0; x < kTilePixels; ++x) sum += image.at(tx * kTilePixels + x, ty * kTilePixels + y);
      }
      const double mean = sum / static_cast<double>(kTilePixels * kTilePixels);
      map.set(static_cast<std::size_t>(ty * kTilesPerSide + tx), mean > boundary);
    }
  }
  return map;
}

PatternMatch classify_pattern(const TileMap& map, const PatternSpec& spec, double rmae_bound) {
  PatternMatch m;
  m.mismatches = std::numeric_limits<int>::max();
  for (int c = 0; c < kClassCount; ++c) {
    const int d = static_cast<int>((map ^ spec.masks[static_cast<std::size_t>(c)]).count());
    if (d < m.mismatches) {
      m.mismatches = d;
      m.cls = c;
    }
  }
  m.rmae = m.mismatches / static_cast<double>(kTileCount);
  m.accepted = m.rmae <= rmae_bound;
  for (int t : spec.forbidden) {
    if (map.test(static_cast<std::size_t>(t))) m.forbidden_violations.push_back(t);
  }
  return m;
}

TextureCheck check_tile_texture(const GrayImage& image, double alpha, double min_pass_fraction) {
  if (image.width() != kImageSize || image.height() != kImageSize) {
    throw std::invalid_argument("check_tile_texture: expected a 256x256 image");
  }
  TextureCheck out;
  out.tiles.reserve(kTileCount);
  std::vector<double> field(static_cast<std::size_t>(kTilePixels * kTilePixels));
  for (int ty = 0; ty < kTilesPerSide; ++ty) {
    for (int tx = 0; tx < kTilesPerSide; ++tx) {
      for (int y = 0; y < kTilePixels; ++y) {
        for (int x = 0; x < kTilePixels; ++x) {
          field[static_cast<std::size_t>(y * kTilePixels + x)] = image.at(tx * kTilePixels + x, ty * kTilePixels + y);
        }
      }
      const bool constant = std::all_of(field.begin(), field.end(), [&](double v) { return v == field[0]; });
      if (constant) {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        out.tiles.push_back({nan, -1.0 / (field.size() - 1.0), nan, false});
        continue;
      }
      out.tiles.push_back(stats::morans_i(field, kTilePixels, kTilePixels, stats::Adjacency::kRook, alpha));
      if (out.tiles.back().pass) ++out.tiles_passed;
    }
  }
  out.pass_fraction = out.tiles_passed / static_cast<double>(kTileCount);
  out.pass = out.pass_fraction >= min_pass_fraction;
  return out;
}

std::vector<int> equal_probability_bins(const IntensityLaw& law, int bins) {
  if (bins < 2) throw std::invalid_argument("equal_probability_bins: need at least two bins");
  const auto p = law.lattice_probabilities();
  std::vector<int> starts = {law.lo};
  double cum = 0.0;
  int next = 1;
  for (int v = law.lo; v < law.hi && next < bins; ++v) {
    cum += p[static_cast<std::size_t>(v - law.lo)];
    if (cum >= static_cast<double>(next) / bins) {
      starts.push_back(v + 1);
      while (next < bins && cum >= static_cast<double>(next) / bins) ++next;
    }
  }
  return starts;
}

namespace {

stats::GofResult gof_for(const std::vector<int>& values, const IntensityLaw& law, int bins, double alpha,
                         std::vector<double>& expected) {
  const auto starts = equal_probability_bins(law, bins);
  const auto p = law.lattice_probabilities();
  const std::size_t groups = starts.size();
  std::vector<double> prob(groups, 0.0);
  for (int v = law.lo; v <= law.hi; ++v) {
    const auto g = static_cast<std::size_t>(std::upper_bound(starts.begin(), starts.end(), v) - starts.begin() - 1);
    prob[g] += p[static_cast<std::size_t>(v - law.lo)];
  }
  std::vector<double> observed(groups, 0.0);
  for (int v : values) {
    const auto it = std::upper_bound(starts.begin(), starts.end(), v);
    const std::size_t g = it == starts.begin() ? 0 : static_cast<std::size_t>(it - starts.begin() - 1);
    observed[g] += 1.0;
  }
  expected.assign(groups, 0.0);
  for (std::size_t g = 0; g < groups; ++g) expected[g] = prob[g] * static_cast<double>(values.size());
  return stats::chi2_gof(observed, expected, alpha);
}

}  // namespace

IntensityGof check_intensity_gof(const GrayImage& image, const TileMap& map, int bins, double alpha,
                                 const FlagLaws& laws) {
  if (bins < 2) throw std::invalid_argument("check_intensity_gof: need at least two bins");
  if (image.width() != kImageSize || image.height() != kImageSize) {
    throw std::invalid_argument("check_intensity_gof: expected a 256x256 image");
  }
  std::vector<int> fg, bg;
  for (int y = 0; y < kImageSize; ++y) {
    for (int x = 0; x < kImageSize; ++x) {
      const int tile = (y / kTilePixels) * kTilesPerSide + x / kTilePixels;
      (map.test(static_cast<std::size_t>(tile)) ? fg : bg).push_back(image.at(x, y));
    }
  }
  if (fg.empty() || bg.empty()) {
    throw std::invalid_argument("check_intensity_gof: foreground and background must both be nonempty");
  }
  IntensityGof out;
  out.foreground = gof_for(fg, laws.foreground, bins, alpha, out.foreground_expected);
  out.background = gof_for(bg, laws.background, bins, alpha, out.background_expected);
  return out;
}

std::pair<int, int> move_tile(TileMap& roles, const PatternSpec& spec, RngStream& rng) {
  std::vector<int> from, to;
  for (int t = 0; t < kTileCount; ++t) {
    if (roles.test(static_cast<std::size_t>(t))) {
      from.push_back(t);
    } else if (!spec.is_forbidden(t)) {
      to.push_back(t);
    }
  }
  if (from.empty() || to.empty()) throw std::invalid_argument("move_tile: no tile can move");
  const int f = from[static_cast<std::size_t>(rng.uniform_int(from.size()))];
  const int t = to[static_cast<std::size_t>(rng.uniform_int(to.size()))];
  roles.reset(static_cast<std::size_t>(f));
  roles.set(static_cast<std::size_t>(t));
  return {f, t};
}

int set_forbidden_tile(TileMap& roles, const PatternSpec& spec, RngStream& rng) {
  std::vector<int> free;
  for (int t : spec.forbidden) {
    if (!roles.test(static_cast<std::size_t>(t))) free.push_back(t);
  }
  if (free.empty()) throw std::invalid_argument("set_forbidden_tile: every forbidden tile is already foreground");
  const int t = free[static_cast<std::size_t>(rng.uniform_int(free.size()))];
  roles.set(static_cast<std::size_t>(t));
  return t;
}

}  // namespace scmkit::flag
