#pragma once

#include <array>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "treemap/model.hpp"

namespace treemap {

/// Axis-aligned rectangle in screen coordinates: (x, y) is the top-left
/// corner and y grows downward.
struct Rect {
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;
  double h = 0.0;

  double left() const { return x; }
  double right() const { return x + w; }
  double top() const { return y; }
  double bottom() const { return y + h; }
  double area() const { return w * h; }
  double diagonal() const;

  friend bool operator==(const Rect&, const Rect&) = default;
};

double intersection_area(const Rect& a, const Rect& b);

/// A rectangle tagged with a hierarchy node index.
struct Cell {
  int id = -1;
  Rect rect;
};

/// A treemap: leaf cells and internal-node group rectangles inside `bounds`.
/// Cells and groups are kept sorted by id.
struct Layout {
  Rect bounds;
  std::vector<Cell> cells;
  std::vector<Cell> groups;
  std::shared_ptr<const Hierarchy> hierarchy;

  const Rect* find_cell(int id) const;
  Rect* find_cell(int id);
  const Rect* find_group(int id) const;

  /// Sorts cells by id and rebuilds every group rectangle as the bounding
  /// box of its descendant cells.
  void rebuild_groups();

  std::string name_of(int id) const;
};

struct ValidationTolerances {
  double area_rel = 1e-6;     // per-leaf area error relative to the root area
  double geometry_rel = 1e-7; // overlap/gap, relative to the root diagonal
};

struct ValidationReport {
  bool passed = false;
  double max_area_error = 0.0;  // relative to root area
  double max_leaf_error = 0.0;  // relative to the leaf's own target area
  int worst_leaf = -1;
  double max_overlap = 0.0;     // absolute area units
  double max_gap = 0.0;         // absolute area units
  std::vector<std::string> failures;
};

/// Checks that every alive leaf has its area, and that the children of each
/// group (and the leaves of a flat layout) tile their parent rectangle.
ValidationReport validate_layout(const Layout& layout, const NormalizedStep& step,
                                 const ValidationTolerances& tol = {});

/// Same checks, against explicit leaf targets given as (id, area) pairs.
ValidationReport validate_partition(const Layout& layout,
                                    const std::vector<std::pair<int, double>>& targets,
                                    const ValidationTolerances& tol = {});

enum class Orientation { Horizontal, Vertical };
enum class Side { Top = 0, Bottom = 1, Left = 2, Right = 3 };

const char* to_string(Side side);

struct Incidence {
  int cell = -1;
  Side side = Side::Top;
  friend bool operator==(const Incidence&, const Incidence&) = default;
  friend auto operator<=>(const Incidence&, const Incidence&) = default;
};

struct MaximalSegment {
  Orientation orientation = Orientation::Horizontal;
  double coord = 0.0;  // x for vertical segments, y for horizontal ones
  double begin = 0.0;
  double end = 0.0;
  std::vector<Incidence> incident;  // sorted
};

/// Sentinels for cell sides lying on the input rectangle.
inline constexpr int kBoundaryTop = -1;
inline constexpr int kBoundaryBottom = -2;
inline constexpr int kBoundaryLeft = -3;
inline constexpr int kBoundaryRight = -4;

struct CellSides {
  int id = -1;
  std::array<int, 4> ref{};  // indexed by Side; segment index or boundary sentinel
};

/// Interior maximal segments of a layout with their incidences and the two
/// order relations. `order_h` holds (s1, s2) when a cell has its bottom on s1
/// and its top on s2; `order_v` holds (s1, s2) when a cell has its left on s1
/// and its right on s2.
struct SegmentGraph {
  Rect bounds;
  std::vector<MaximalSegment> segments;
  std::vector<std::pair<int, int>> order_h;
  std::vector<std::pair<int, int>> order_v;
  std::vector<CellSides> sides;  // parallel to the layout's cells
};

class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Extracts interior maximal segments. Where a horizontal and a vertical
/// segment cross, the one separating cells with the shallower common ancestor
/// passes through and the other is split; on ties the vertical passes.
SegmentGraph maximal_segments(const Layout& layout);

/// True iff both layouts have the same interior segments (matched by their
/// incidence sets) and identical order relations.
bool order_equivalent(const Layout& a, const Layout& b);

/// Tolerance used for colinearity and adjacency decisions.
double coordinate_epsilon(const Rect& bounds);

}  // namespace treemap
