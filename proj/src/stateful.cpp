#include "treemap/stateful.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include "treemap/metrics.hpp"
#include "treemap/stateless.hpp"

namespace treemap {

Algorithm initial_algorithm(Algorithm a) {
  switch (a) {
    case Algorithm::LocalMoves0:
    case Algorithm::LocalMoves4: return Algorithm::Approximation;
    case Algorithm::Git: return Algorithm::Squarified;
    default: break;
  }
  throw std::invalid_argument("initial_algorithm: " + std::string(short_name(a)) + " is not state-aware");
}

int move_budget(Algorithm a) { return a == Algorithm::LocalMoves4 ? 4 : 0; }

LayoutState init_state(Algorithm algorithm, std::shared_ptr<const Hierarchy> hierarchy,
                       const NormalizedStep& first_step, const Rect& bounds, std::uint64_t seed) {
  LayoutState state;
  state.algorithm = algorithm;
  state.current = layout_step(std::move(hierarchy), first_step, initial_algorithm(algorithm), bounds);
  state.step = first_step;
  state.rng_seed = seed;
  return state;
}

const Rect* item_rect(const Layout& layout, int node) {
  if (layout.hierarchy->is_leaf(node)) return layout.find_cell(node);
  return layout.find_group(node);
}

namespace {

double map_coord(double v, double o0, double o1, double n0, double n1) {
  if (v == o0) return n0;
  if (v == o1) return n1;
  return n0 + (v - o0) * (n1 - n0) / (o1 - o0);
}

double rho(const Rect& r) { return r.w > 0.0 && r.h > 0.0 ? std::min(r.w, r.h) / std::max(r.w, r.h) : 0.0; }

std::vector<int> present_children(const Layout& layout, int parent) {
  std::vector<int> out;
  for (int c : layout.hierarchy->children[parent])
    if (item_rect(layout, c)) out.push_back(c);
  return out;
}

int child_index(const Hierarchy& h, int node) {
  const auto& siblings = h.children[h.parent[node]];
  return static_cast<int>(std::find(siblings.begin(), siblings.end(), node) - siblings.begin());
}

void erase_item(Layout& layout, int node) {
  const auto& h = *layout.hierarchy;
  std::erase_if(layout.cells, [&](const Cell& c) { return c.id == node || h.is_ancestor(node, c.id); });
}

bool near(double a, double b, double eps) { return std::abs(a - b) <= eps; }

/// Length over which two intervals overlap.
double overlap(double a0, double a1, double b0, double b1) { return std::min(a1, b1) - std::max(a0, b0); }

/// Removes `node` from the layout and lets neighbouring siblings take over its
/// space. Returns false when the parent had to be re-laid instead.
bool remove_item(Layout& layout, int node, Algorithm init) {
  const auto& h = *layout.hierarchy;
  const double eps = 1e-9 * layout.bounds.diagonal();
  const int parent = h.parent[node];
  const Rect x = *item_rect(layout, node);
  const Rect parent_rect = *item_rect(layout, parent);
  std::vector<int> siblings;
  for (int s : present_children(layout, parent))
    if (s != node) siblings.push_back(s);

  // Sides in order left, right, top, bottom.
  int best_side = -1;
  double best_score = -1.0;
  std::vector<std::pair<int, Rect>> best_moves;
  for (int side = 0; side < 4; ++side) {
    std::vector<std::pair<int, Rect>> moves;
    bool eligible = true;
    for (int s : siblings) {
      Rect r = *item_rect(layout, s);
      bool touches = false, within = false;
      Rect grown = r;
      switch (side) {
        case 0:
          touches = near(r.right(), x.left(), eps) && overlap(r.top(), r.bottom(), x.top(), x.bottom()) > eps;
          within = r.top() >= x.top() - eps && r.bottom() <= x.bottom() + eps;
          grown.w = x.right() - r.x;
          break;
        case 1:
          touches = near(r.left(), x.right(), eps) && overlap(r.top(), r.bottom(), x.top(), x.bottom()) > eps;
          within = r.top() >= x.top() - eps && r.bottom() <= x.bottom() + eps;
          grown = {x.x, r.y, r.right() - x.x, r.h};
          break;
        case 2:
          touches = near(r.bottom(), x.top(), eps) && overlap(r.left(), r.right(), x.left(), x.right()) > eps;
          within = r.left() >= x.left() - eps && r.right() <= x.right() + eps;
          grown.h = x.bottom() - r.y;
          break;
        default:
          touches = near(r.top(), x.bottom(), eps) && overlap(r.left(), r.right(), x.left(), x.right()) > eps;
          within = r.left() >= x.left() - eps && r.right() <= x.right() + eps;
          grown = {r.x, x.y, r.w, r.bottom() - x.y};
          break;
      }
      if (!touches) continue;
      if (!within) {
        eligible = false;
        break;
      }
      moves.push_back({s, grown});
    }
    if (!eligible || moves.empty()) continue;
    double score = std::numeric_limits<double>::infinity();
    for (const auto& [s, r] : moves) score = std::min(score, rho(r));
    if (score > best_score) {
      best_score = score;
      best_side = side;
      best_moves = std::move(moves);
    }
  }

  erase_item(layout, node);
  if (best_side >= 0) {
    for (const auto& [s, r] : best_moves) place_item(layout, s, r);
    layout.rebuild_groups();
    return true;
  }
  // No side can absorb the item cleanly: re-lay the remaining siblings by
  // their current areas and carry their contents along.
  LayoutRequest req{parent_rect, {}};
  for (int s : siblings) {
    Rect r = *item_rect(layout, s);
    req.items.push_back({s, r.area()});
  }
  layout.rebuild_groups();
  auto rects = layout_items(init, req, h.depth[parent]);
  for (std::size_t i = 0; i < rects.size(); ++i) place_item(layout, req.items[i].id, rects[i]);
  layout.rebuild_groups();
  return false;
}

/// Places the subtree of `node` by slicing it off the sibling item where the
/// worse of the two resulting aspect ratios is best.
void insert_item(Layout& layout, int node, const NormalizedStep& next, double scale, Algorithm init) {
  const auto& h = *layout.hierarchy;
  const int parent = h.parent[node];
  const double a_x = next.area[node] * scale;
  int best_host = -1;
  double best_score = -1.0;
  Rect best_x, best_rest;
  for (int host : present_children(layout, parent)) {
    Rect r = *item_rect(layout, host);
    double a_h = std::max(next.area[host] * scale, 0.0);
    double f = a_x / (a_h + a_x);
    bool x_first = child_index(h, node) < child_index(h, host);
    Rect xr, rest;
    if (r.w >= r.h) {
      double w = r.w * f;
      xr = x_first ? Rect{r.x, r.y, w, r.h} : Rect{r.right() - w, r.y, w, r.h};
      rest = x_first ? Rect{r.x + w, r.y, r.right() - (r.x + w), r.h} : Rect{r.x, r.y, xr.x - r.x, r.h};
    } else {
      double ht = r.h * f;
      xr = x_first ? Rect{r.x, r.y, r.w, ht} : Rect{r.x, r.bottom() - ht, r.w, ht};
      rest = x_first ? Rect{r.x, r.y + ht, r.w, r.bottom() - (r.y + ht)} : Rect{r.x, r.y, r.w, xr.y - r.y};
    }
    double score = std::min(rho(xr), rho(rest));
    if (score > best_score) {
      best_score = score;
      best_host = host;
      best_x = xr;
      best_rest = rest;
    }
  }
  if (best_host < 0) throw std::logic_error("insert_item: parent has no present children");
  place_item(layout, best_host, best_rest);
  std::vector<double> area(next.area.begin(), next.area.end());
  for (double& a : area) a *= scale;
  layout_subtree(h, node, best_x, area, init, layout.cells);
  layout.rebuild_groups();
}

double mean_rho_or_zero(const Layout& layout) {
  double acc = 0.0;
  for (const auto& c : layout.cells) acc += rho(c.rect);
  return layout.cells.empty() ? 0.0 : acc / static_cast<double>(layout.cells.size());
}

}  // namespace

void place_item(Layout& layout, int node, const Rect& target) {
  const auto& h = *layout.hierarchy;
  if (h.is_leaf(node)) {
    if (Rect* r = layout.find_cell(node)) *r = target;
    return;
  }
  const Rect* g = layout.find_group(node);
  if (!g) return;
  const Rect old = *g;
  for (auto& c : layout.cells) {
    if (!h.is_ancestor(node, c.id)) continue;
    Rect& r = c.rect;
    double l = map_coord(r.left(), old.left(), old.right(), target.left(), target.right());
    double rt = map_coord(r.right(), old.left(), old.right(), target.left(), target.right());
    double t = map_coord(r.top(), old.top(), old.bottom(), target.top(), target.bottom());
    double b = map_coord(r.bottom(), old.top(), old.bottom(), target.top(), target.bottom());
    r = {l, t, rt - l, b - t};
  }
  // Keep the group box current for later lookups in the same edit.
  for (auto& gr : layout.groups)
    if (gr.id == node) gr.rect = target;
}

RealizeStats fit_areas(Layout& layout, const NormalizedStep& step, const RealizeOptions& opts) {
  layout.rebuild_groups();
  auto graph = maximal_segments(layout);
  auto d = Dissection::from_layout(layout, graph);
  const double scale = layout.bounds.area() / step.total_area;
  std::vector<double> targets;
  double sum = 0.0;
  for (int id : d.ids) {
    targets.push_back(step.area[id] * scale);
    sum += targets.back();
  }
  // Cells of the layout must be exactly the alive leaves.
  for (double& t : targets) t *= layout.bounds.area() / sum;
  auto stats = realize(d, targets, opts);
  if (stats.iterations > 0)
    for (std::size_t i = 0; i < layout.cells.size(); ++i) layout.cells[i].rect = d.cell_rect(i);
  layout.rebuild_groups();
  return stats;
}

bool flip_move(Layout& layout, int a, int b) {
  const double eps = 1e-9 * layout.bounds.diagonal();
  const Rect* ra = item_rect(layout, a);
  const Rect* rb = item_rect(layout, b);
  if (!ra || !rb) return false;
  Rect first = *ra, second = *rb;
  int id_first = a, id_second = b;
  bool side_by_side = near(first.top(), second.top(), eps) && near(first.bottom(), second.bottom(), eps) &&
                      (near(first.right(), second.left(), eps) || near(second.right(), first.left(), eps));
  bool stacked = near(first.left(), second.left(), eps) && near(first.right(), second.right(), eps) &&
                 (near(first.bottom(), second.top(), eps) || near(second.bottom(), first.top(), eps));
  if (!side_by_side && !stacked) return false;
  if ((side_by_side && second.left() < first.left()) || (stacked && second.top() < first.top())) {
    std::swap(first, second);
    std::swap(id_first, id_second);
  }
  const double f = first.area() / (first.area() + second.area());
  Rect u{first.x, first.y, second.right() - first.x, second.bottom() - first.y};
  Rect nf, ns;
  if (side_by_side) {
    double ht = u.h * f;
    nf = {u.x, u.y, u.w, ht};
    ns = {u.x, u.y + ht, u.w, u.bottom() - (u.y + ht)};
  } else {
    double w = u.w * f;
    nf = {u.x, u.y, w, u.h};
    ns = {u.x + w, u.y, u.right() - (u.x + w), u.h};
  }
  place_item(layout, id_first, nf);
  place_item(layout, id_second, ns);
  layout.rebuild_groups();
  return true;
}

namespace {

// One of the eight symmetries of the plane that map axis-aligned rectangles
// to axis-aligned rectangles.
struct Symmetry {
  bool transpose, flip_x, flip_y;

  Rect apply(Rect r) const {
    if (transpose) r = {r.y, r.x, r.h, r.w};
    if (flip_x) r.x = -(r.x + r.w);
    if (flip_y) r.y = -(r.y + r.h);
    return r;
  }

  Rect invert(Rect r) const {
    if (flip_y) r.y = -(r.y + r.h);
    if (flip_x) r.x = -(r.x + r.w);
    if (transpose) r = {r.y, r.x, r.h, r.w};
    return r;
  }
};

}  // namespace

bool stretch_move(Layout& layout, int a, int r) {
  const double eps = 1e-9 * layout.bounds.diagonal();
  const Rect* pa = item_rect(layout, a);
  const Rect* pr = item_rect(layout, r);
  if (!pa || !pr) return false;
  for (int code = 0; code < 8; ++code) {
    Symmetry s{(code & 4) != 0, (code & 2) != 0, (code & 1) != 0};
    Rect ca = s.apply(*pa), cr = s.apply(*pr);
    // Canonical form: A sits on top of R, both end at the same right edge,
    // and A overhangs R on the left.
    if (!near(ca.bottom(), cr.top(), eps) || !near(ca.right(), cr.right(), eps)) continue;
    if (!(cr.left() > ca.left() + eps)) continue;
    Rect na{ca.x, ca.y, cr.left() - ca.x, ca.h};
    Rect nr{cr.x, ca.y, cr.w, cr.bottom() - ca.y};
    place_item(layout, a, s.invert(na));
    place_item(layout, r, s.invert(nr));
    layout.rebuild_groups();
    return true;
  }
  return false;
}

int improve_with_moves(Layout& layout, const NormalizedStep& step, int budget, const RealizeOptions& opts) {
  constexpr std::size_t kWorstCells = 6;
  constexpr int kMaxEvaluations = 24;
  const auto& h = *layout.hierarchy;
  const double eps = 1e-9 * layout.bounds.diagonal();
  int accepted = 0, evaluations = 0;
  while (accepted < budget && evaluations < kMaxEvaluations) {
    const double base = mean_rho_or_zero(layout);
    std::vector<std::pair<double, int>> ranked;
    for (const auto& c : layout.cells) ranked.push_back({rho(c.rect), c.id});
    std::sort(ranked.begin(), ranked.end());
    if (ranked.size() > kWorstCells) ranked.resize(kWorstCells);

    bool improved = false;
    for (const auto& [value, cell] : ranked) {
      if (improved || evaluations >= kMaxEvaluations) break;
      const Rect cr = *layout.find_cell(cell);
      for (int s : present_children(layout, h.parent[cell])) {
        if (s == cell) continue;
        const Rect sr = *item_rect(layout, s);
        bool adjacent =
            ((near(cr.right(), sr.left(), eps) || near(sr.right(), cr.left(), eps)) &&
             overlap(cr.top(), cr.bottom(), sr.top(), sr.bottom()) > eps) ||
            ((near(cr.bottom(), sr.top(), eps) || near(sr.bottom(), cr.top(), eps)) &&
             overlap(cr.left(), cr.right(), sr.left(), sr.right()) > eps);
        if (!adjacent) continue;
        for (int kind = 0; kind < 3 && !improved && evaluations < kMaxEvaluations; ++kind) {
          Layout trial = layout;
          bool applied = kind == 0   ? flip_move(trial, cell, s)
                         : kind == 1 ? stretch_move(trial, cell, s)
                                     : stretch_move(trial, s, cell);
          if (!applied) continue;
          ++evaluations;
          RealizeStats stats;
          try {
            stats = fit_areas(trial, step, opts);
          } catch (const GeometryError&) {
            continue;
          }
          if (!stats.converged) continue;
          if (mean_rho_or_zero(trial) > base + 1e-12) {
            layout = std::move(trial);
            ++accepted;
            improved = true;
          }
        }
        if (improved || evaluations >= kMaxEvaluations) break;
      }
    }
    if (!improved) break;
  }
  return accepted;
}

AdvanceReport advance(LayoutState& state, const NormalizedStep& next, const RealizeOptions& opts) {
  AdvanceReport report;
  Layout& layout = state.current;
  const auto& h = *layout.hierarchy;
  const Algorithm init = initial_algorithm(state.algorithm);
  const double scale = layout.bounds.area() / next.total_area;

  bool any_survivor = false;
  for (const auto& c : layout.cells) any_survivor |= next.alive(c.id);
  if (!any_survivor) {
    layout = layout_step(layout.hierarchy, next, init, layout.bounds);
    state.step = next;
    report.inserted = static_cast<int>(layout.cells.size());
    return report;
  }

  // Deletions, in dataset order. A vanished leaf goes together with every
  // ancestor that vanishes with it or would be left without cells; such an
  // ancestor re-enters through the insertions below.
  for (int leaf : h.leaves()) {
    if (next.alive(leaf) || !layout.find_cell(leaf)) continue;
    int item = leaf;
    while (h.parent[item] != h.root &&
           (!next.alive(h.parent[item]) || present_children(layout, h.parent[item]).size() == 1))
      item = h.parent[item];
    if (!remove_item(layout, item, init)) ++report.relaid;
    ++report.deleted;
  }

  // Insertions: each new leaf enters through its highest absent ancestor.
  for (int leaf : h.leaves()) {
    if (!next.alive(leaf) || layout.find_cell(leaf)) continue;
    int item = leaf;
    while (!item_rect(layout, h.parent[item])) item = h.parent[item];
    insert_item(layout, item, next, scale, init);
    ++report.inserted;
  }

  auto stats = fit_areas(layout, next, opts);
  report.realize_iterations = stats.iterations;
  report.max_rel_area_error = stats.max_rel_area_error;
  if (!stats.converged) {
    std::ostringstream msg;
    msg << "area realization did not converge at step " << next.timestep << " (residual "
        << stats.max_rel_area_error << " after " << stats.iterations << " iterations)";
    throw RealizeError(msg.str());
  }
  report.moves = improve_with_moves(layout, next, move_budget(state.algorithm), opts);
  state.step = next;
  return report;
}

}  // namespace treemap
