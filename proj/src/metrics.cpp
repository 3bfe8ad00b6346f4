#include "treemap/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace treemap {

double aspect_ratio(const Rect& r) {
  if (!(r.w > 0.0) || !(r.h > 0.0)) throw std::invalid_argument("aspect_ratio of a degenerate rectangle");
  return std::min(r.w, r.h) / std::max(r.w, r.h);
}

double corner_travel(const Rect& a, const Rect& b, const Rect& root) {
  // Per axis, two corners share each of left/right and top/bottom.
  double dx = 2.0 * (std::abs(a.left() - b.left()) + std::abs(a.right() - b.right()));
  double dy = 2.0 * (std::abs(a.top() - b.top()) + std::abs(a.bottom() - b.bottom()));
  return (dx + dy) / (4.0 * root.diagonal());
}

double stability(double d_next, double d_base) { return std::max(0.0, d_next - d_base); }

double mean_aspect_ratio(const Layout& layout) {
  if (layout.cells.empty()) return std::numeric_limits<double>::quiet_NaN();
  double acc = 0.0;
  for (const auto& c : layout.cells) acc += aspect_ratio(c.rect);
  return acc / static_cast<double>(layout.cells.size());
}

StepMetrics transition_metrics(const Layout& prev, const Layout& next, const Layout& baseline) {
  StepMetrics m;
  double ct = 0.0, ct_base = 0.0, sigma = 0.0;
  for (const auto& c : prev.cells) {
    const Rect* a = next.find_cell(c.id);
    const Rect* b = baseline.find_cell(c.id);
    if (!a || !b) continue;
    double d_next = corner_travel(c.rect, *a, prev.bounds);
    double d_base = corner_travel(c.rect, *b, prev.bounds);
    ct += d_next;
    ct_base += d_base;
    sigma += stability(d_next, d_base);
    ++m.compared;
  }
  if (m.compared == 0) {
    m.mean_ct = m.mean_ct_baseline = m.mean_sigma = std::numeric_limits<double>::quiet_NaN();
    return m;
  }
  m.mean_ct = ct / m.compared;
  m.mean_ct_baseline = ct_base / m.compared;
  m.mean_sigma = sigma / m.compared;
  return m;
}

void aggregate(MetricRecord& record) {
  double rho = 0.0, sigma = 0.0, ct = 0.0, ct_base = 0.0;
  int rho_n = 0, sigma_n = 0;
  for (std::size_t i = 0; i < record.per_step.size(); ++i) {
    const auto& s = record.per_step[i];
    if (!std::isnan(s.mean_rho)) {
      rho += s.mean_rho;
      ++rho_n;
    }
    if (i > 0 && !std::isnan(s.mean_sigma)) {
      sigma += s.mean_sigma;
      ct += s.mean_ct;
      ct_base += s.mean_ct_baseline;
      ++sigma_n;
    }
  }
  const double nan = std::numeric_limits<double>::quiet_NaN();
  record.dataset_mean_rho = rho_n ? rho / rho_n : nan;
  record.dataset_mean_sigma = sigma_n ? sigma / sigma_n : nan;
  record.dataset_mean_ct = sigma_n ? ct / sigma_n : nan;
  record.dataset_mean_ct_baseline = sigma_n ? ct_base / sigma_n : nan;
}

}  // namespace treemap
