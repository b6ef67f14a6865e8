#pragma once

#include <map>
#include <string>

#include "scmkit/report.hpp"

namespace scmkit {

/// SVG documents for a report, keyed by file name:
///   alphabet: pair_prevalence.svg (per-image pair counts, prescribed count marked)
///   voronoi:  region_count_hist.svg (off-class bins drawn in a second colour)
///   flag:     flag_classes.svg
///   any report with pc1/pc2 values: pc_scatter.svg
/// Output is byte-identical for equal reports. A report without images gets
/// a placeholder document per plot.
std::map<std::string, std::string> render_plots(const ContextReport& report);

}  // namespace scmkit
