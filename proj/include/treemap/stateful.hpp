#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>

#include "treemap/algorithm.hpp"
#include "treemap/geometry.hpp"
#include "treemap/model.hpp"
#include "treemap/realizer.hpp"

namespace treemap {

/// Raised when the area realizer cannot fit the next step.
class RealizeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct LayoutState {
  Algorithm algorithm = Algorithm::LocalMoves0;
  Layout current;
  NormalizedStep step;
  std::uint64_t rng_seed = 0;
};

struct AdvanceReport {
  int deleted = 0;    // items removed (a group counts once)
  int inserted = 0;   // items placed (a new group counts once)
  int relaid = 0;     // deletions that fell back to re-laying the parent
  int moves = 0;      // accepted local moves
  int realize_iterations = 0;
  double max_rel_area_error = 0.0;
};

/// Stateless algorithm used for the first step and for new subtrees.
Algorithm initial_algorithm(Algorithm state_aware);

/// Number of local moves allowed per step: 4 for LM4, otherwise 0.
int move_budget(Algorithm state_aware);

LayoutState init_state(Algorithm algorithm, std::shared_ptr<const Hierarchy> hierarchy,
                       const NormalizedStep& first_step, const Rect& bounds, std::uint64_t seed = 0);

/// Carries the layout to the next step: structural deletions, insertions
/// into the best-fitting sibling, order-preserving area update, then local
/// moves for LM4. Throws RealizeError if the areas cannot be fitted.
AdvanceReport advance(LayoutState& state, const NormalizedStep& next_step, const RealizeOptions& opts = {});

// Building blocks, exposed for testing.

/// Rectangle of a leaf cell or group, or nullptr if the node has no cells.
const Rect* item_rect(const Layout& layout, int node);

/// Moves a leaf, or maps every cell of a group affinely, into `target`.
void place_item(Layout& layout, int node, const Rect& target);

/// Re-fits the layout to the given areas keeping its structure.
RealizeStats fit_areas(Layout& layout, const NormalizedStep& step, const RealizeOptions& opts = {});

/// Rotates the split between two sibling items whose union is a rectangle.
bool flip_move(Layout& layout, int a, int b);

/// Lets the wall between sibling items `a` and `r` extend through the
/// neighbouring T-junction. Tries all eight orientations; false if none fits.
bool stretch_move(Layout& layout, int a, int r);

/// Greedy local improvement: applies up to `budget` moves, each kept only if
/// the mean aspect ratio increases after re-fitting areas. Returns the number
/// of accepted moves.
int improve_with_moves(Layout& layout, const NormalizedStep& step, int budget, const RealizeOptions& opts = {});

}  // namespace treemap
