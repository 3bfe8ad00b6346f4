#pragma once

#include <utility>
#include <vector>

#include "treemap/geometry.hpp"
#include "treemap/model.hpp"
#include "treemap/realizer.hpp"

namespace treemap {

/// The reference layout T* for one transition. `baseline` holds cells for
/// surviving leaves only; it need not tile the root when walls are present.
struct BaselineResult {
  Layout baseline;
  std::vector<Rect> walls;
  std::vector<int> deleted;   // leaves alive before, gone after (collapsed)
  std::vector<int> inserted;  // leaves alive only after
  bool converged = false;
  double max_rel_area_error = 0.0;
  int iterations = 0;
};

/// Re-realizes `layout` order-equivalently with the given leaf areas. Every
/// cell of the layout needs a positive target; targets are rescaled to sum
/// to the root area.
BaselineResult hill_climb_realize(const Layout& layout, const std::vector<std::pair<int, double>>& targets,
                                  const RealizeOptions& opts = {});

/// Builds T* from the previous layout and both normalized steps. Deleted
/// leaves shrink to a sliver; the area of inserted leaves is spread over the
/// interior maximal segments as walls of uniform thickness.
BaselineResult build_baseline(const Layout& prev, const NormalizedStep& prev_step, const NormalizedStep& next_step,
                              const RealizeOptions& opts = {});

}  // namespace treemap
