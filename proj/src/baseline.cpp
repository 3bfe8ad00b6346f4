#include "treemap/baseline.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace treemap {

namespace {

Layout to_layout(const Layout& like, const Dissection& d) {
  Layout out;
  out.bounds = like.bounds;
  out.hierarchy = like.hierarchy;
  for (std::size_t c = 0; c < d.num_cells(); ++c)
    if (d.ids[c] >= 0) out.cells.push_back({d.ids[c], d.cell_rect(c)});
  out.rebuild_groups();
  return out;
}

void rescale(std::vector<double>& targets, double total) {
  double sum = 0.0;
  for (double t : targets) sum += t;
  for (double& t : targets) t *= total / sum;
}

}  // namespace

BaselineResult hill_climb_realize(const Layout& layout, const std::vector<std::pair<int, double>>& targets,
                                  const RealizeOptions& opts) {
  std::map<int, double> by_id(targets.begin(), targets.end());
  auto graph = maximal_segments(layout);
  auto d = Dissection::from_layout(layout, graph);
  std::vector<double> t;
  for (int id : d.ids) {
    auto it = by_id.find(id);
    if (it == by_id.end()) throw GeometryError("hill_climb_realize: no target for " + layout.name_of(id));
    if (!(it->second > 0.0)) throw GeometryError("hill_climb_realize: non-positive target for " + layout.name_of(id));
    t.push_back(it->second);
  }
  rescale(t, layout.bounds.area());
  auto stats = realize(d, t, opts);
  BaselineResult result;
  // At a fixed point keep the input coordinates bit for bit.
  result.baseline = stats.iterations == 0 ? layout : to_layout(layout, d);
  result.converged = stats.converged;
  result.max_rel_area_error = stats.max_rel_area_error;
  result.iterations = stats.iterations;
  return result;
}

BaselineResult build_baseline(const Layout& prev, const NormalizedStep& prev_step, const NormalizedStep& next_step,
                              const RealizeOptions& opts) {
  const double root_area = prev.bounds.area();
  const auto& h = *prev.hierarchy;
  BaselineResult result;
  result.baseline.bounds = prev.bounds;
  result.baseline.hierarchy = prev.hierarchy;

  // Next-step areas rescaled to this layout's rectangle.
  const double next_scale = next_step.total_area > 0.0 ? root_area / next_step.total_area : 1.0;
  double inserted_area = 0.0;
  for (int leaf : h.leaves()) {
    bool before = prev_step.alive(leaf), after = next_step.alive(leaf);
    if (before && !after) result.deleted.push_back(leaf);
    if (!before && after) {
      result.inserted.push_back(leaf);
      inserted_area += next_step.area[leaf] * next_scale;
    }
  }

  auto graph = maximal_segments(prev);
  auto base = Dissection::from_layout(prev, graph);
  const std::size_t n = base.num_cells();
  const std::size_t k = base.num_segments();

  std::size_t survivors = 0;
  for (int id : base.ids) survivors += next_step.alive(id) ? 1 : 0;
  if (survivors == 0) {
    result.converged = true;
    result.baseline.rebuild_groups();
    return result;
  }

  if (k == 0) {
    // A single cell: no walls to thicken. Scale it about its center.
    const Rect& r = prev.cells.front().rect;
    double target = next_step.area[base.ids[0]] * next_scale;
    double f = std::sqrt(target / r.area());
    double w = r.w * f, ht = r.h * f;
    result.baseline.cells.push_back({base.ids[0], {r.x + (r.w - w) / 2, r.y + (r.h - ht) / 2, w, ht}});
    result.baseline.rebuild_groups();
    result.converged = true;
    return result;
  }

  const double sliver = 1e-12 * root_area;
  std::vector<double> targets(n);
  for (std::size_t c = 0; c < n; ++c) {
    int id = base.ids[c];
    targets[c] = next_step.alive(id) ? next_step.area[id] * next_scale : sliver;
  }

  Dissection d;
  if (inserted_area <= 0.0) {
    d = base;
  } else {
    // Split every segment s into s- (index 2s) and s+ (index 2s+1) with a wall
    // cell between them.
    double total_length = 0.0;
    for (const auto& s : graph.segments) total_length += s.end - s.begin;
    const double tau = inserted_area / total_length;

    std::vector<std::vector<int>> before(k), after(k);
    for (std::size_t c = 0; c < n; ++c) {
      const auto& r = base.refs[c];
      if (r[1] >= 0) before[r[1]].push_back(static_cast<int>(c));
      if (r[3] >= 0) before[r[3]].push_back(static_cast<int>(c));
      if (r[0] >= 0) after[r[0]].push_back(static_cast<int>(c));
      if (r[2] >= 0) after[r[2]].push_back(static_cast<int>(c));
    }
    auto map_ref = [](int ref, Side side) {
      if (ref < 0) return ref;
      return (side == Side::Top || side == Side::Left) ? 2 * ref + 1 : 2 * ref;
    };

    d.bounds = base.bounds;
    for (std::size_t s = 0; s < k; ++s) {
      const Orientation o = base.orientation[s];
      double min_thickness = INFINITY;
      for (const auto* side : {&before[s], &after[s]})
        for (int c : *side) {
          Rect r = base.cell_rect(c);
          min_thickness = std::min(min_thickness, o == Orientation::Vertical ? r.w : r.h);
        }
      double eps = std::min(tau / 2, 0.25 * min_thickness);
      d.orientation.push_back(o);
      d.orientation.push_back(o);
      d.position.push_back(base.position[s] - eps);
      d.position.push_back(base.position[s] + eps);
    }
    for (std::size_t c = 0; c < n; ++c) {
      std::array<int, 4> r{};
      for (int side = 0; side < 4; ++side) r[side] = map_ref(base.refs[c][side], static_cast<Side>(side));
      d.refs.push_back(r);
      d.ids.push_back(base.ids[c]);
    }
    for (std::size_t s = 0; s < k; ++s) {
      // The wall spans the segment between the segments its ends lie on,
      // read off the first and last cells along it.
      const auto& seg = graph.segments[s];
      std::array<int, 4> r{};
      if (seg.orientation == Orientation::Vertical) {
        int first = -1, last = -1;
        for (int c : before[s]) {
          Rect q = base.cell_rect(c);
          if (first < 0 || q.top() < base.cell_rect(first).top()) first = c;
          if (last < 0 || q.bottom() > base.cell_rect(last).bottom()) last = c;
        }
        r[static_cast<int>(Side::Top)] = map_ref(base.refs[first][0], Side::Top);
        r[static_cast<int>(Side::Bottom)] = map_ref(base.refs[last][1], Side::Bottom);
        r[static_cast<int>(Side::Left)] = 2 * static_cast<int>(s);
        r[static_cast<int>(Side::Right)] = 2 * static_cast<int>(s) + 1;
      } else {
        int first = -1, last = -1;
        for (int c : before[s]) {
          Rect q = base.cell_rect(c);
          if (first < 0 || q.left() < base.cell_rect(first).left()) first = c;
          if (last < 0 || q.right() > base.cell_rect(last).right()) last = c;
        }
        r[static_cast<int>(Side::Left)] = map_ref(base.refs[first][2], Side::Left);
        r[static_cast<int>(Side::Right)] = map_ref(base.refs[last][3], Side::Right);
        r[static_cast<int>(Side::Top)] = 2 * static_cast<int>(s);
        r[static_cast<int>(Side::Bottom)] = 2 * static_cast<int>(s) + 1;
      }
      d.refs.push_back(r);
      d.ids.push_back(-1);
      targets.push_back(tau * (seg.end - seg.begin));
    }
  }
  rescale(targets, root_area);

  auto stats = realize(d, targets, opts);
  result.converged = stats.converged;
  result.max_rel_area_error = stats.max_rel_area_error;
  result.iterations = stats.iterations;
  if (stats.iterations == 0 && result.deleted.empty() && result.inserted.empty()) {
    result.baseline = prev;
    return result;
  }
  for (std::size_t c = 0; c < d.num_cells(); ++c) {
    if (d.ids[c] < 0) {
      result.walls.push_back(d.cell_rect(c));
    } else if (next_step.alive(d.ids[c])) {
      result.baseline.cells.push_back({d.ids[c], d.cell_rect(c)});
    }
  }
  result.baseline.rebuild_groups();
  return result;
}

}  // namespace treemap
