#pragma once

#include <string>
#include <vector>

#include "treemap/geometry.hpp"

namespace treemap {

/// min(w, h) / max(w, h). Throws std::invalid_argument for a degenerate rect.
double aspect_ratio(const Rect& r);

/// Summed l1 displacement of the four matched corners, divided by four
/// times the root diagonal. Bounded by (w + h) / diagonal of the root, which
/// exceeds 1 for any root.
double corner_travel(const Rect& a, const Rect& b, const Rect& root);

/// Change beyond what the data forced: max(0, d_next - d_base).
double stability(double d_next, double d_base);

struct StepMetrics {
  int t = 0;
  double mean_rho = 0.0;
  // Transition t-1 -> t; NaN at the first step.
  double mean_ct = 0.0;
  double mean_ct_baseline = 0.0;
  double mean_sigma = 0.0;
  int compared = 0;  // leaves alive at both t-1 and t
};

struct MetricRecord {
  std::string dataset;
  std::string algorithm;
  std::vector<StepMetrics> per_step;
  double dataset_mean_rho = 0.0;
  double dataset_mean_sigma = 0.0;  // NaN with fewer than two steps
  double dataset_mean_ct = 0.0;
  double dataset_mean_ct_baseline = 0.0;
};

/// Mean aspect ratio over the cells of one layout.
double mean_aspect_ratio(const Layout& layout);

/// Transition metrics between T (prev) and T' (next) given the baseline T*.
/// Only leaves with a cell in all three layouts are measured.
StepMetrics transition_metrics(const Layout& prev, const Layout& next, const Layout& baseline);

/// Fills the dataset means: rho over all steps, stability terms over the
/// transitions (steps with no compared leaves are skipped).
void aggregate(MetricRecord& record);

}  // namespace treemap
