#include "scmkit/alphabet.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "scmkit/errors.hpp"

namespace scmkit::alphabet {

namespace {

struct Domino {
  Letter first;   // left or top
  Letter second;  // right or bottom
  bool vertical;
};

int cell(int r, int c) { return r * kGridSize + c; }

// Places dominoes[i..] into free cells, trying anchors in random order.
bool place_dominoes(const std::vector<Domino>& dominoes, std::size_t i,
                    std::array<std::optional<Letter>, kCellCount>& grid, RngStream& rng) {
  if (i == dominoes.size()) return true;
  const Domino& d = dominoes[i];
  std::vector<int> anchors;
  for (int r = 0; r < kGridSize; ++r) {
    for (int c = 0; c < kGridSize; ++c) {
      const int r2 = d.vertical ? r + 1 : r;
      const int c2 = d.vertical ? c : c + 1;
      if (r2 >= kGridSize || c2 >= kGridSize) continue;
      if (grid[static_cast<std::size_t>(cell(r, c))] || grid[static_cast<std::size_t>(cell(r2, c2))]) continue;
      anchors.push_back(cell(r, c));
    }
  }
  rng.shuffle(std::span<int>(anchors));
  for (int a : anchors) {
    const int second = d.vertical ? a + kGridSize : a + 1;
    grid[static_cast<std::size_t>(a)] = d.first;
    grid[static_cast<std::size_t>(second)] = d.second;
    if (place_dominoes(dominoes, i + 1, grid, rng)) return true;
    grid[static_cast<std::size_t>(a)].reset();
    grid[static_cast<std::size_t>(second)].reset();
  }
  return false;
}

}  // namespace

std::string pair_name(Pair p) {
  switch (p) {
    case Pair::XY: return "X-Y";
    case Pair::ZK: return "Z-K";
    case Pair::ZV: return "Z-V";
    case Pair::ZW: return "Z-W";
  }
  return "?";
}

std::string grid_to_string(const LetterGrid& grid) {
  std::string s;
  s.reserve(kCellCount);
  for (Letter l : grid) s.push_back(letter_char(l));
  return s;
}

LetterGrid grid_from_string(const std::string& text) {
  if (text.size() != kCellCount) throw std::invalid_argument("letter grid needs 64 characters");
  LetterGrid grid{};
  for (std::size_t i = 0; i < text.size(); ++i) {
    const auto l = letter_from_char(text[i]);
    if (!l) throw std::invalid_argument(std::string("unknown letter '") + text[i] + "'");
    grid[i] = *l;
  }
  return grid;
}

LetterGrid random_letter_grid(RngStream& rng) {
  // Vertical dominoes first: they have fewer anchors.
  const std::vector<Domino> dominoes = [] {
    std::vector<Domino> d = {{Letter::Z, Letter::K, true},
                             {Letter::Z, Letter::K, true},
                             {Letter::Z, Letter::V, true},
                             {Letter::Z, Letter::W, true}};
    for (int i = 0; i < kPairCounts[0]; ++i) d.push_back({Letter::X, Letter::Y, false});
    return d;
  }();

  std::array<std::optional<Letter>, kCellCount> partial{};
  if (!place_dominoes(dominoes, 0, partial, rng)) {
    // Unreachable: 12 dominoes always fit on an empty 8x8 board.
    throw std::logic_error("alphabet layout search exhausted");
  }

  std::vector<Letter> singles;
  for (Letter l : kLetters) {
    int paired = 0;
    for (const auto& d : dominoes) paired += (d.first == l) + (d.second == l);
    for (int i = paired; i < kLetterCounts[letter_index(l)]; ++i) singles.push_back(l);
  }
  rng.shuffle(std::span<Letter>(singles));

  LetterGrid grid{};
  std::size_t next = 0;
  for (std::size_t i = 0; i < partial.size(); ++i) {
    grid[i] = partial[i] ? *partial[i] : singles[next++];
  }
  return grid;
}

GrayImage render_grid(const LetterGrid& grid, const GlyphSet& glyphs) {
  GrayImage img(kImageSize, kImageSize, 0);
  for (int r = 0; r < kGridSize; ++r) {
    for (int c = 0; c < kGridSize; ++c) {
      const GrayImage& g = glyphs.glyph(grid[static_cast<std::size_t>(cell(r, c))]);
      for (int y = 0; y < kGlyphSize; ++y) {
        for (int x = 0; x < kGlyphSize; ++x) img.at(c * kGlyphSize + x, r * kGlyphSize + y) = g.at(x, y);
      }
    }
  }
  return img;
}

AlphabetSample generate_alphabet(RngStream& rng, const GlyphSet& glyphs) {
  AlphabetSample s;
  s.grid = random_letter_grid(rng);
  s.image = render_grid(s.grid, glyphs);
  return s;
}

TileMatches classify_tiles(const GrayImage& image, const GlyphSet& glyphs, double threshold) {
  if (!(threshold > 0.0 && threshold < 1.0)) {
    throw std::invalid_argument("classify_tiles: threshold must be in (0,1)");
  }
  if (image.width() != kImageSize || image.height() != kImageSize) {
    throw std::invalid_argument("classify_tiles: expected a 256x256 image");
  }
  TileMatches out{};
  GrayImage tile(kGlyphSize, kGlyphSize);
  for (int r = 0; r < kGridSize; ++r) {
    for (int c = 0; c < kGridSize; ++c) {
      for (int y = 0; y < kGlyphSize; ++y) {
        for (int x = 0; x < kGlyphSize; ++x) tile.at(x, y) = image.at(c * kGlyphSize + x, r * kGlyphSize + y);
      }
      TileMatch best;
      best.score = -1.0;
      Letter best_letter = Letter::H;
      for (Letter l : kLetters) {
        const double score = normalized_cross_correlation(tile, glyphs.glyph(l));
        if (score > best.score) {
          best.score = score;
          best_letter = l;
        }
      }
      if (best.score >= threshold) best.letter = best_letter;
      out[static_cast<std::size_t>(cell(r, c))] = best;
    }
  }
  return out;
}

std::optional<LetterGrid> recognized_grid(const TileMatches& matches) {
  LetterGrid grid{};
  for (std::size_t i = 0; i < matches.size(); ++i) {
    if (!matches[i].letter) return std::nullopt;
    grid[i] = *matches[i].letter;
  }
  return grid;
}

LetterPrevalence check_letter_prevalence(const LetterGrid& grid, double alpha) {
  LetterPrevalence out;
  for (Letter l : grid) ++out.counts[letter_index(l)];
  std::array<double, kLetterCount> observed{};
  std::array<double, kLetterCount> expected{};
  for (std::size_t i = 0; i < kLetterCount; ++i) {
    observed[i] = out.counts[i];
    expected[i] = kLetterCounts[i];
  }
  out.gof = stats::chi2_gof(observed, expected, alpha);
  out.exact = out.counts == kLetterCounts;
  return out;
}

LetterPrevalence check_letter_prevalence(const TileMatches& matches, double alpha) {
  const auto grid = recognized_grid(matches);
  if (!grid) throw AnalysisError("letter prevalence undefined: unrecognized tiles present");
  return check_letter_prevalence(*grid, alpha);
}

PairPrevalence check_pair_prevalence(const LetterGrid& grid) {
  const auto at = [&](int r, int c) -> std::optional<Letter> {
    if (r < 0 || c < 0 || r >= kGridSize || c >= kGridSize) return std::nullopt;
    return grid[static_cast<std::size_t>(cell(r, c))];
  };
  const auto is_zpartner = [](std::optional<Letter> l) {
    return l == Letter::K || l == Letter::V || l == Letter::W;
  };

  PairPrevalence out;
  for (int r = 0; r < kGridSize; ++r) {
    for (int c = 0; c < kGridSize; ++c) {
      const Letter l = *at(r, c);
      if (l == Letter::X) {
        if (at(r, c + 1) == Letter::Y) {
          ++out.counts[static_cast<std::size_t>(Pair::XY)];
        } else {
          out.violations.push_back({r, c, "X without Y to its right"});
        }
      } else if (l == Letter::Y) {
        if (at(r, c - 1) != Letter::X) out.violations.push_back({r, c, "Y without X to its left"});
      } else if (l == Letter::Z) {
        const auto below = at(r + 1, c);
        if (below == Letter::K) {
          ++out.counts[static_cast<std::size_t>(Pair::ZK)];
        } else if (below == Letter::V) {
          ++out.counts[static_cast<std::size_t>(Pair::ZV)];
        } else if (below == Letter::W) {
          ++out.counts[static_cast<std::size_t>(Pair::ZW)];
        } else {
          out.violations.push_back({r, c, "Z without K/V/W below"});
        }
      } else if (is_zpartner(l) && at(r - 1, c) != Letter::Z) {
        out.violations.push_back({r, c, std::string(1, letter_char(l)) + " without Z above"});
      }
    }
  }
  return out;
}

int break_pair(LetterGrid& grid, RngStream& rng) {
  std::vector<int> ys;
  for (int r = 0; r < kGridSize; ++r) {
    for (int c = 1; c < kGridSize; ++c) {
      if (grid[static_cast<std::size_t>(cell(r, c))] == Letter::Y &&
          grid[static_cast<std::size_t>(cell(r, c - 1))] == Letter::X) {
        ys.push_back(cell(r, c));
      }
    }
  }
  if (ys.empty()) throw AnalysisError("break_pair: grid has no X-Y pair");
  const int target = ys[static_cast<std::size_t>(rng.uniform_int(ys.size()))];
  grid[static_cast<std::size_t>(target)] = Letter::X;
  return target;
}

}  // namespace scmkit::alphabet
