#include "scmkit/imgproc/morphology.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "scmkit/imgproc/components.hpp"

namespace scmkit::imgproc {

namespace {

struct Point {
  long long x;
  long long y;
  auto operator<=>(const Point&) const = default;
};

long long cross(const Point& o, const Point& a, const Point& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

// Andrew's monotone chain; counter-clockwise, collinear points dropped.
std::vector<Point> convex_hull(std::vector<Point> pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;
  std::vector<Point> hull(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i > 0; --i) {
    const auto& p = pts[i - 1];
    while (k >= t && cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
    hull[k++] = p;
  }
  hull.resize(k - 1);
  return hull;
}

long long floor_div(long long a, long long b) {
  long long q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

long long ceil_div(long long a, long long b) { return -floor_div(-a, b); }

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

double std_of(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size()));
}

}  // namespace

std::vector<RegionProps> region_properties(const BinaryMask& mask) {
  const LabelMap labels = connected_components(mask, Connectivity::kEight);
  std::vector<std::vector<Point>> pixels(static_cast<std::size_t>(labels.count()));
  for (int y = 0; y < labels.height(); ++y) {
    for (int x = 0; x < labels.width(); ++x) {
      const int l = labels.at(x, y);
      if (l > 0) pixels[static_cast<std::size_t>(l - 1)].push_back({x, y});
    }
  }

  std::vector<RegionProps> out;
  out.reserve(pixels.size());
  for (const auto& region : pixels) {
    RegionProps props;
    props.area = static_cast<double>(region.size());

    double sx = 0.0;
    double sy = 0.0;
    long long edges = 0;
    for (const auto& p : region) {
      sx += static_cast<double>(p.x);
      sy += static_cast<double>(p.y);
      const int x = static_cast<int>(p.x);
      const int y = static_cast<int>(p.y);
      edges += !mask.get(x + 1, y) + !mask.get(x - 1, y) + !mask.get(x, y + 1) + !mask.get(x, y - 1);
    }
    props.perimeter = static_cast<double>(edges);

    const double cx = sx / props.area;
    const double cy = sy / props.area;
    double cxx = 0.0;
    double cyy = 0.0;
    double cxy = 0.0;
    for (const auto& p : region) {
      const double dx = static_cast<double>(p.x) - cx;
      const double dy = static_cast<double>(p.y) - cy;
      cxx += dx * dx;
      cyy += dy * dy;
      cxy += dx * dy;
    }
    cxx /= props.area;
    cyy /= props.area;
    cxy /= props.area;
    const double tr = 0.5 * (cxx + cyy);
    const double disc = std::sqrt(std::max(0.0, 0.25 * (cxx - cyy) * (cxx - cyy) + cxy * cxy));
    const double l1 = tr + disc;
    const double l2 = std::max(0.0, tr - disc);
    props.eccentricity = l1 > 0.0 ? std::sqrt(std::max(0.0, 1.0 - l2 / l1)) : 0.0;

    const auto hull = convex_hull(region);
    if (hull.size() >= 3) {
      long long minx = hull[0].x, maxx = hull[0].x, miny = hull[0].y, maxy = hull[0].y;
      for (const auto& h : hull) {
        minx = std::min(minx, h.x);
        maxx = std::max(maxx, h.x);
        miny = std::min(miny, h.y);
        maxy = std::max(maxy, h.y);
      }
      // Each hull edge is a half-plane; on row y it bounds x from one side.
      long long inside = 0;
      for (long long y = miny; y <= maxy; ++y) {
        long long lo = minx;
        long long hi = maxx;
        for (std::size_t i = 0; i < hull.size() && lo <= hi; ++i) {
          const Point& a = hull[i];
          const Point& b = hull[(i + 1) % hull.size()];
          const long long ex = b.x - a.x;
          const long long ey = b.y - a.y;
          const long long rhs = ex * (y - a.y);  // need ey * (x - a.x) <= rhs
          if (ey == 0) {
            if (rhs < 0) hi = lo - 1;
          } else if (ey > 0) {
            hi = std::min(hi, a.x + floor_div(rhs, ey));
          } else {
            lo = std::max(lo, a.x + ceil_div(rhs, ey));
          }
        }
        if (hi >= lo) inside += hi - lo + 1;
      }
      props.solidity = props.area / static_cast<double>(inside);
    }
    out.push_back(props);
  }
  return out;
}

FeatureVector morphology_features(const BinaryMask& mask) {
  const auto regions = region_properties(mask);
  if (regions.empty()) throw std::invalid_argument("morphology_features: empty mask");
  std::vector<double> area, perimeter, eccentricity, solidity;
  for (const auto& r : regions) {
    area.push_back(r.area);
    perimeter.push_back(r.perimeter);
    eccentricity.push_back(r.eccentricity);
    solidity.push_back(r.solidity);
  }
  FeatureVector out;
  out.add("component_count", static_cast<double>(regions.size()));
  out.add("area_mean", mean_of(area));
  out.add("area_std", std_of(area));
  out.add("perimeter_mean", mean_of(perimeter));
  out.add("perimeter_std", std_of(perimeter));
  out.add("eccentricity_mean", mean_of(eccentricity));
  out.add("eccentricity_std", std_of(eccentricity));
  out.add("solidity_mean", mean_of(solidity));
  out.add("solidity_std", std_of(solidity));
  return out;
}

}  // namespace scmkit::imgproc
