#pragma once

#include <memory>
#include <span>
#include <vector>

#include "treemap/algorithm.hpp"
#include "treemap/geometry.hpp"
#include "treemap/model.hpp"

namespace treemap {

struct LayoutItem {
  int id = -1;
  double area = 0.0;
};

/// Items to place inside `rect`, in dataset order. Areas must be positive;
/// they are rescaled to the rectangle area before layout.
struct LayoutRequest {
  Rect rect;
  std::vector<LayoutItem> items;

  std::vector<double> areas() const;
};

// Each function returns one rectangle per request item, in item order.

/// Vertical slices on even depth, horizontal slices on odd depth.
std::vector<Rect> slice_and_dice(const LayoutRequest& req, int depth);

std::vector<Rect> squarified(const LayoutRequest& req);

/// Balanced 1/3-2/3 splitting of the size-sorted list; an item of at least
/// two thirds of the total gets a strip of its own.
std::vector<Rect> approximation(const LayoutRequest& req);

std::vector<Rect> strip(const LayoutRequest& req);
std::vector<Rect> split(const LayoutRequest& req);

enum class PivotRule { Middle, Size, Split };

/// Index of the pivot item among `areas`.
int select_pivot(std::span<const double> areas, PivotRule rule);

std::vector<Rect> pivot(const LayoutRequest& req, PivotRule rule);

/// Strips along the top, right, bottom and left sides in turn, moving inward.
std::vector<Rect> spiral(const LayoutRequest& req);

enum class Curve { Hilbert, Moore };

std::vector<Rect> space_filling(const LayoutRequest& req, Curve curve);

/// Dispatches to one of the functions above. Throws std::invalid_argument for
/// state-aware algorithms.
std::vector<Rect> layout_items(Algorithm algorithm, const LayoutRequest& req, int depth);

/// Lays out the alive descendants of `node` inside `rect`, applying the
/// algorithm once per internal node. Appends leaf cells to `cells`.
void layout_subtree(const Hierarchy& hierarchy, int node, const Rect& rect,
                    std::span<const double> area, Algorithm algorithm, std::vector<Cell>& cells);

/// Full treemap of one normalized time step.
Layout layout_step(std::shared_ptr<const Hierarchy> hierarchy, const NormalizedStep& step,
                   Algorithm algorithm, const Rect& bounds);

}  // namespace treemap
