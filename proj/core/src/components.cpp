#include "scmkit/imgproc/components.hpp"

#include <utility>
#include <vector>

namespace scmkit::imgproc {

LabelMap connected_components(const BinaryMask& mask, Connectivity connectivity) {
  static constexpr int kOffsets[8][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1},
                                         {1, 1}, {1, -1}, {-1, 1}, {-1, -1}};
  const int n_offsets = connectivity == Connectivity::kFour ? 4 : 8;
  const int w = mask.width();
  const int h = mask.height();
  std::vector<int> labels(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), 0);
  const auto idx = [w](int x, int y) {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(w) + static_cast<std::size_t>(x);
  };

  int next = 0;
  std::vector<std::pair<int, int>> stack;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!mask.get(x, y) || labels[idx(x, y)] != 0) continue;
      ++next;
      labels[idx(x, y)] = next;
      stack.emplace_back(x, y);
      while (!stack.empty()) {
        const auto [cx, cy] = stack.back();
        stack.pop_back();
        for (int k = 0; k < n_offsets; ++k) {
          const int nx = cx + kOffsets[k][0];
          const int ny = cy + kOffsets[k][1];
          if (!mask.get(nx, ny) || labels[idx(nx, ny)] != 0) continue;
          labels[idx(nx, ny)] = next;
          stack.emplace_back(nx, ny);
        }
      }
    }
  }
  return LabelMap(w, h, std::move(labels), next);
}

}  // namespace scmkit::imgproc
