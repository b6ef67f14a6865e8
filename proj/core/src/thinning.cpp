#include "scmkit/imgproc/thinning.hpp"

#include <array>
#include <utility>
#include <vector>

namespace scmkit::imgproc {

namespace {

// Clockwise from north: P2..P9 in Zhang-Suen notation.
constexpr std::array<std::pair<int, int>, 8> kRing = {{
    {0, -1}, {1, -1}, {1, 0}, {1, 1}, {0, 1}, {-1, 1}, {-1, 0}, {-1, -1},
}};

std::array<int, 8> ring(const BinaryMask& m, int x, int y) {
  std::array<int, 8> p{};
  for (std::size_t i = 0; i < kRing.size(); ++i) {
    p[i] = m.get(x + kRing[i].first, y + kRing[i].second) ? 1 : 0;
  }
  return p;
}

int transitions(const std::array<int, 8>& p) {
  int a = 0;
  for (std::size_t i = 0; i < 8; ++i) {
    if (p[i] == 0 && p[(i + 1) % 8] == 1) ++a;
  }
  return a;
}

// Yokoi 8-connectivity number. Ring starts east and runs counter-clockwise.
int yokoi8(const std::array<int, 8>& p) {
  // Zhang-Suen order is N, NE, E, SE, S, SW, W, NW.
  const std::array<int, 8> q = {p[2], p[1], p[0], p[7], p[6], p[5], p[4], p[3]};
  int c = 0;
  for (std::size_t k = 0; k < 8; k += 2) {
    const int a = 1 - q[k];
    const int b = 1 - q[(k + 1) % 8];
    const int d = 1 - q[(k + 2) % 8];
    c += a - a * b * d;
  }
  return c;
}

bool zhang_suen_pass(BinaryMask& m, bool first) {
  std::vector<std::pair<int, int>> doomed;
  for (int y = 0; y < m.height(); ++y) {
    for (int x = 0; x < m.width(); ++x) {
      if (!m.get(x, y)) continue;
      const auto p = ring(m, x, y);
      int b = 0;
      for (int v : p) b += v;
      if (b < 2 || b > 6) continue;
      if (transitions(p) != 1) continue;
      const int n = p[0];
      const int e = p[2];
      const int s = p[4];
      const int w = p[6];
      if (first) {
        if (n * e * s != 0 || e * s * w != 0) continue;
      } else {
        if (n * e * w != 0 || n * s * w != 0) continue;
      }
      doomed.emplace_back(x, y);
    }
  }
  for (const auto& [x, y] : doomed) m.set(x, y, false);
  return !doomed.empty();
}

bool prune_redundant(BinaryMask& m) {
  bool changed = false;
  for (int y = 0; y < m.height(); ++y) {
    for (int x = 0; x < m.width(); ++x) {
      if (!m.get(x, y)) continue;
      const auto p = ring(m, x, y);
      int b = 0;
      for (int v : p) b += v;
      if (b >= 2 && yokoi8(p) == 1) {
        m.set(x, y, false);
        changed = true;
      }
    }
  }
  return changed;
}

}  // namespace

BinaryMask skeletonize(const BinaryMask& mask) {
  BinaryMask m = mask;
  for (;;) {
    const bool a = zhang_suen_pass(m, true);
    const bool b = zhang_suen_pass(m, false);
    if (!a && !b) break;
  }
  while (prune_redundant(m)) {
  }
  return m;
}

int neighbor_count(const BinaryMask& mask, int x, int y) {
  int b = 0;
  for (const auto& [dx, dy] : kRing) b += mask.get(x + dx, y + dy) ? 1 : 0;
  return b;
}

}  // namespace scmkit::imgproc
