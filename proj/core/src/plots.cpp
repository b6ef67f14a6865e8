#include "scmkit/plots.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <vector>

#include "scmkit/alphabet.hpp"
#include "scmkit/flag.hpp"
#include "scmkit/voronoi.hpp"

namespace scmkit {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 400.0;
constexpr double kLeft = 60.0;
constexpr double kRight = 20.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 50.0;

// Fixed-precision formatting keeps the output independent of locale and
// stream state.
std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

class Svg {
 public:
  Svg(double w, double h) : w_(w), h_(h) {}

  void rect(double x, double y, double w, double h, const char* fill) {
    body_ += "<rect x=\"" + num(x) + "\" y=\"" + num(y) + "\" width=\"" + num(w) + "\" height=\"" + num(h) +
             "\" fill=\"" + fill + "\"/>\n";
  }
  void line(double x1, double y1, double x2, double y2, const char* stroke, const char* dash = nullptr) {
    body_ += "<line x1=\"" + num(x1) + "\" y1=\"" + num(y1) + "\" x2=\"" + num(x2) + "\" y2=\"" + num(y2) +
             "\" stroke=\"" + stroke + "\"";
    if (dash) body_ += std::string(" stroke-dasharray=\"") + dash + "\"";
    body_ += "/>\n";
  }
  void circle(double x, double y, double r, const char* fill) {
    body_ += "<circle cx=\"" + num(x) + "\" cy=\"" + num(y) + "\" r=\"" + num(r) + "\" fill=\"" + fill +
             "\" fill-opacity=\"0.6\"/>\n";
  }
  void text(double x, double y, const std::string& s, const char* anchor = "middle", int size = 12) {
    body_ += "<text x=\"" + num(x) + "\" y=\"" + num(y) + "\" font-size=\"" + std::to_string(size) +
             "\" text-anchor=\"" + anchor + "\" font-family=\"sans-serif\">" + escape(s) + "</text>\n";
  }

  std::string str() const {
    return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(w_) + "\" height=\"" + num(h_) +
           "\" viewBox=\"0 0 " + num(w_) + " " + num(h_) + "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n" +
           body_ + "</svg>\n";
  }

 private:
  double w_;
  double h_;
  std::string body_;
};

std::string placeholder(const std::string& title) {
  Svg svg(kWidth, kHeight);
  svg.text(kWidth / 2, kTop, title, "middle", 14);
  svg.text(kWidth / 2, kHeight / 2, "no data");
  return svg.str();
}

struct Bar {
  std::string label;
  double value = 0.0;
  bool highlight = false;
};

// Vertical bars in a plot area; highlighted bars use the second colour.
void draw_bars(Svg& svg, const std::vector<Bar>& bars, double x0, double y0, double w, double h,
               const std::string& title, bool label_every = true) {
  svg.text(x0 + w / 2, y0 - 8, title, "middle", 13);
  svg.line(x0, y0 + h, x0 + w, y0 + h, "black");
  svg.line(x0, y0, x0, y0 + h, "black");
  double top = 0.0;
  for (const auto& b : bars) top = std::max(top, b.value);
  if (top <= 0.0) top = 1.0;
  svg.text(x0 - 4, y0 + 4, num(top), "end", 10);
  svg.text(x0 - 4, y0 + h, "0", "end", 10);
  if (bars.empty()) return;
  const double slot = w / static_cast<double>(bars.size());
  const std::size_t every = label_every ? 1 : std::max<std::size_t>(1, bars.size() / 12);
  for (std::size_t i = 0; i < bars.size(); ++i) {
    const double bh = h * bars[i].value / top;
    const double x = x0 + slot * static_cast<double>(i);
    svg.rect(x + slot * 0.1, y0 + h - bh, slot * 0.8, bh, bars[i].highlight ? "#d95f02" : "#1b9e77");
    if (i % every == 0) svg.text(x + slot / 2, y0 + h + 14, bars[i].label, "middle", 10);
  }
}

std::string pair_prevalence_plot(const ContextReport& report) {
  const std::string title = "Pair counts per image";
  Svg svg(kWidth, kHeight);
  svg.text(kWidth / 2, 18, title, "middle", 14);
  const double pw = (kWidth - kLeft - kRight) / 2.0 - 20.0;
  const double ph = (kHeight - kTop - kBottom) / 2.0 - 30.0;
  bool any = false;
  for (int p = 0; p < alphabet::kPairCount; ++p) {
    const std::string name = alphabet::pair_name(static_cast<alphabet::Pair>(p));
    std::map<int, double> hist;
    for (const auto& img : report.images) {
      auto it = img.values.find("pairs." + name);
      if (it != img.values.end()) hist[static_cast<int>(it->second)] += 1.0;
    }
    const int want = alphabet::kPairCounts[p];
    int lo = want;
    int hi = want;
    for (const auto& [n, c] : hist) {
      lo = std::min(lo, n);
      hi = std::max(hi, n);
    }
    std::vector<Bar> bars;
    for (int n = lo; n <= hi; ++n) {
      auto it = hist.find(n);
      bars.push_back({std::to_string(n), it == hist.end() ? 0.0 : it->second, n != want});
      any = any || it != hist.end();
    }
    const double x0 = kLeft + (p % 2) * (pw + 40.0);
    const double y0 = kTop + 10.0 + (p / 2) * (ph + 50.0);
    draw_bars(svg, bars, x0, y0, pw, ph, name + " (expected " + std::to_string(want) + ")");
  }
  return any ? svg.str() : placeholder(title);
}

std::string region_count_plot(const ContextReport& report) {
  const std::string title = "Recovered region counts";
  std::map<int, double> hist;
  for (const auto& img : report.images) {
    auto it = img.values.find("region_count");
    if (it != img.values.end()) hist[static_cast<int>(it->second)] += 1.0;
  }
  if (hist.empty()) return placeholder(title);
  const int lo = std::min(hist.begin()->first, voronoi::kClasses.front() - 1);
  const int hi = std::max(hist.rbegin()->first, voronoi::kClasses.back() + 1);
  std::vector<Bar> bars;
  for (int n = lo; n <= hi; ++n) {
    auto it = hist.find(n);
    const bool on_class = voronoi::classify_region_count(n).label.has_value();
    bars.push_back({std::to_string(n), it == hist.end() ? 0.0 : it->second, !on_class});
  }
  Svg svg(kWidth, kHeight);
  draw_bars(svg, bars, kLeft, kTop, kWidth - kLeft - kRight, kHeight - kTop - kBottom, title, false);
  svg.text(kWidth - kRight, kHeight - 10, "orange = off-class", "end", 10);
  return svg.str();
}

std::string flag_class_plot(const ContextReport& report) {
  const std::string title = "Accepted flag classes";
  if (report.images.empty()) return placeholder(title);
  std::vector<Bar> bars;
  for (int c = 0; c < flag::kClassCount; ++c) {
    auto it = report.aggregates.find("class_hist." + std::to_string(c));
    bars.push_back({std::to_string(c), it == report.aggregates.end() ? 0.0 : it->second, false});
  }
  Svg svg(kWidth, kHeight);
  draw_bars(svg, bars, kLeft, kTop, kWidth - kLeft - kRight, kHeight - kTop - kBottom, title);
  return svg.str();
}

std::string pc_scatter_plot(const ContextReport& report) {
  const std::string title = "PC1 vs PC2";
  struct Pt {
    double x;
    double y;
    bool gen;
  };
  std::vector<Pt> pts;
  for (const auto& img : report.images) {
    auto a = img.values.find("pc1");
    auto b = img.values.find("pc2");
    if (a == img.values.end() || b == img.values.end()) continue;
    if (!std::isfinite(a->second) || !std::isfinite(b->second)) continue;
    pts.push_back({a->second, b->second, img.file.starts_with("gen/")});
  }
  if (pts.empty()) return placeholder(title);
  double xlo = pts[0].x, xhi = pts[0].x, ylo = pts[0].y, yhi = pts[0].y;
  for (const auto& p : pts) {
    xlo = std::min(xlo, p.x);
    xhi = std::max(xhi, p.x);
    ylo = std::min(ylo, p.y);
    yhi = std::max(yhi, p.y);
  }
  if (xhi - xlo < 1e-12) xhi = xlo + 1.0;
  if (yhi - ylo < 1e-12) yhi = ylo + 1.0;
  const double w = kWidth - kLeft - kRight;
  const double h = kHeight - kTop - kBottom;
  Svg svg(kWidth, kHeight);
  svg.text(kWidth / 2, kTop - 12, title, "middle", 14);
  svg.line(kLeft, kTop + h, kLeft + w, kTop + h, "black");
  svg.line(kLeft, kTop, kLeft, kTop + h, "black");
  svg.text(kLeft, kTop + h + 16, num(xlo), "start", 10);
  svg.text(kLeft + w, kTop + h + 16, num(xhi), "end", 10);
  svg.text(kLeft - 4, kTop + h, num(ylo), "end", 10);
  svg.text(kLeft - 4, kTop + 8, num(yhi), "end", 10);
  // train first so generated points sit on top
  for (int pass = 0; pass < 2; ++pass) {
    for (const auto& p : pts) {
      if (p.gen != (pass == 1)) continue;
      svg.circle(kLeft + w * (p.x - xlo) / (xhi - xlo), kTop + h - h * (p.y - ylo) / (yhi - ylo), 2.5,
                 p.gen ? "#d95f02" : "#1b9e77");
    }
  }
  svg.text(kWidth - kRight, kHeight - 10, "green = train, orange = gen", "end", 10);
  return svg.str();
}

bool has_pc_values(const ContextReport& report) {
  for (const auto& img : report.images) {
    if (img.values.contains("pc1")) return true;
  }
  return false;
}

}  // namespace

std::map<std::string, std::string> render_plots(const ContextReport& report) {
  std::map<std::string, std::string> out;
  const bool compare = report.aggregates.contains("ks.overall") || report.aggregates.contains("ks.pc1");
  switch (report.model) {
    case ModelId::kAlphabet: out["pair_prevalence.svg"] = pair_prevalence_plot(report); break;
    case ModelId::kVoronoi:
      if (!compare) out["region_count_hist.svg"] = region_count_plot(report);
      break;
    case ModelId::kFlag: out["flag_classes.svg"] = flag_class_plot(report); break;
    case ModelId::kExternal: break;
  }
  if (compare || has_pc_values(report)) out["pc_scatter.svg"] = pc_scatter_plot(report);
  return out;
}

}  // namespace scmkit
