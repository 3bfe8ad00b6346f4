#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "treemap/geometry.hpp"

namespace treemap {

/// A rectangular dissection described combinatorially: every cell side
/// refers to an interior segment (or a boundary sentinel), and only segment
/// positions are free. Moving segments keeps the layout order-equivalent.
struct Dissection {
  Rect bounds;
  std::vector<Orientation> orientation;       // per segment
  std::vector<double> position;               // x for vertical, y for horizontal
  std::vector<std::array<int, 4>> refs;       // per cell, indexed by Side
  std::vector<int> ids;                       // per cell; -1 for wall cells

  static Dissection from_layout(const Layout& layout, const SegmentGraph& graph);

  std::size_t num_cells() const { return refs.size(); }
  std::size_t num_segments() const { return position.size(); }

  double coordinate(int ref, Side side) const;
  Rect cell_rect(std::size_t cell) const;
  double cell_area(std::size_t cell) const { return cell_rect(cell).area(); }
};

struct RealizeOptions {
  double tolerance = 1e-6;
  int max_iterations = 10000;
  /// Shuffles the segment sweep order; the default is canonical order.
  std::optional<std::uint64_t> shuffle_seed;
};

struct RealizeStats {
  bool converged = false;
  double max_rel_area_error = 0.0;
  int iterations = 0;
};

/// Relative area error of one cell. Tiny targets are measured against a
/// floor of 1e-9 of the root area.
double relative_area_error(double area, double target, double root_area);

/// Moves segments until every cell reaches its target area. Targets are
/// per cell and must sum to the root area.
///
/// Each iteration is either a sweep that repositions one segment at a time
/// so that the achieved/target ratios on both sides agree, or a damped
/// Newton step on all segment positions at once. Sweeps are used to warm up
/// and whenever a Newton step fails to reduce the residual.
RealizeStats realize(Dissection& d, const std::vector<double>& targets, const RealizeOptions& opts = {});

}  // namespace treemap
