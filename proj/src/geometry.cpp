#include "treemap/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <unordered_map>

namespace treemap {

double Rect::diagonal() const { return std::sqrt(w * w + h * h); }

double intersection_area(const Rect& a, const Rect& b) {
  double w = std::min(a.right(), b.right()) - std::max(a.left(), b.left());
  double h = std::min(a.bottom(), b.bottom()) - std::max(a.top(), b.top());
  return (w > 0.0 && h > 0.0) ? w * h : 0.0;
}

double coordinate_epsilon(const Rect& bounds) { return 1e-9 * bounds.diagonal(); }

namespace {

const Rect* find_in(const std::vector<Cell>& cells, int id) {
  auto it = std::lower_bound(cells.begin(), cells.end(), id,
                             [](const Cell& c, int v) { return c.id < v; });
  return (it != cells.end() && it->id == id) ? &it->rect : nullptr;
}

}  // namespace

const Rect* Layout::find_cell(int id) const { return find_in(cells, id); }

Rect* Layout::find_cell(int id) { return const_cast<Rect*>(find_in(cells, id)); }

const Rect* Layout::find_group(int id) const { return find_in(groups, id); }

void Layout::rebuild_groups() {
  std::sort(cells.begin(), cells.end(), [](const Cell& a, const Cell& b) { return a.id < b.id; });
  groups.clear();
  if (!hierarchy) return;
  const auto& h = *hierarchy;
  std::map<int, Rect> boxes;
  for (const auto& c : cells) {
    for (int p = h.parent[c.id]; p != -1; p = h.parent[p]) {
      auto [it, inserted] = boxes.emplace(p, c.rect);
      if (inserted) continue;
      Rect& b = it->second;
      double l = std::min(b.left(), c.rect.left());
      double t = std::min(b.top(), c.rect.top());
      double r = std::max(b.right(), c.rect.right());
      double bo = std::max(b.bottom(), c.rect.bottom());
      b = {l, t, r - l, bo - t};
    }
  }
  for (const auto& [id, r] : boxes) groups.push_back({id, r});
  // The root group is the input rectangle itself.
  for (auto& g : groups)
    if (g.id == h.root) g.rect = bounds;
}

std::string Layout::name_of(int id) const {
  if (hierarchy && id >= 0 && static_cast<std::size_t>(id) < hierarchy->size()) return hierarchy->ids[id];
  return std::to_string(id);
}

const char* to_string(Side side) {
  switch (side) {
    case Side::Top: return "top";
    case Side::Bottom: return "bottom";
    case Side::Left: return "left";
    case Side::Right: return "right";
  }
  return "?";
}

namespace {

struct TileMeasure {
  double overlap = 0.0;
  double gap = 0.0;
};

TileMeasure measure_tiling(const Rect& parent, std::vector<Rect> children) {
  TileMeasure m;
  double covered = 0.0;
  for (const auto& c : children) {
    double inside = intersection_area(c, parent);
    m.overlap += c.area() - inside;
    covered += inside;
  }
  std::sort(children.begin(), children.end(),
            [](const Rect& a, const Rect& b) { return a.left() < b.left(); });
  double pair_overlap = 0.0;
  for (std::size_t i = 0; i < children.size(); ++i)
    for (std::size_t j = i + 1; j < children.size() && children[j].left() < children[i].right(); ++j)
      pair_overlap += intersection_area(children[i], children[j]);
  m.overlap += pair_overlap;
  m.gap = std::max(0.0, parent.area() - (covered - pair_overlap));
  return m;
}

}  // namespace

ValidationReport validate_partition(const Layout& layout,
                                    const std::vector<std::pair<int, double>>& targets,
                                    const ValidationTolerances& tol) {
  ValidationReport report;
  const double root_area = layout.bounds.area();
  const double diag = layout.bounds.diagonal();
  const double geometry_tol = tol.geometry_rel * diag * diag;

  std::set<int> expected;
  for (const auto& [id, area] : targets) {
    expected.insert(id);
    const Rect* r = layout.find_cell(id);
    if (!r) {
      report.failures.push_back("missing cell " + layout.name_of(id));
      continue;
    }
    if (r->w < 0.0 || r->h < 0.0) report.failures.push_back("negative extent for " + layout.name_of(id));
    double err = std::abs(r->area() - area) / root_area;
    if (area > 0.0) report.max_leaf_error = std::max(report.max_leaf_error, std::abs(r->area() - area) / area);
    if (err > report.max_area_error) {
      report.max_area_error = err;
      report.worst_leaf = id;
    }
  }
  for (const auto& c : layout.cells)
    if (!expected.count(c.id)) report.failures.push_back("unexpected cell " + layout.name_of(c.id));

  auto check = [&](const Rect& parent, const std::vector<Rect>& kids) {
    TileMeasure m = measure_tiling(parent, kids);
    report.max_overlap = std::max(report.max_overlap, m.overlap);
    report.max_gap = std::max(report.max_gap, m.gap);
  };

  if (layout.hierarchy && !layout.groups.empty()) {
    const auto& h = *layout.hierarchy;
    for (const auto& g : layout.groups) {
      std::vector<Rect> kids;
      for (int c : h.children[g.id]) {
        if (const Rect* r = layout.find_cell(c)) kids.push_back(*r);
        else if (const Rect* gr = layout.find_group(c)) kids.push_back(*gr);
      }
      check(g.rect, kids);
    }
    if (const Rect* root = layout.find_group(h.root); !root || !(*root == layout.bounds)) {
      std::vector<Rect> all;
      for (const auto& c : layout.cells) all.push_back(c.rect);
      check(layout.bounds, all);
    }
  } else {
    std::vector<Rect> all;
    for (const auto& c : layout.cells) all.push_back(c.rect);
    check(layout.bounds, all);
  }

  if (report.max_area_error > tol.area_rel) report.failures.push_back("area error exceeds tolerance");
  if (report.max_overlap > geometry_tol) report.failures.push_back("overlapping cells");
  if (report.max_gap > geometry_tol) report.failures.push_back("coverage gap");
  report.passed = report.failures.empty();
  return report;
}

ValidationReport validate_layout(const Layout& layout, const NormalizedStep& step,
                                 const ValidationTolerances& tol) {
  std::vector<std::pair<int, double>> targets;
  if (layout.hierarchy) {
    for (int leaf : layout.hierarchy->leaves())
      if (step.alive(leaf)) targets.emplace_back(leaf, step.area[leaf]);
  } else {
    for (const auto& c : layout.cells) targets.emplace_back(c.id, step.area.at(c.id));
  }
  return validate_partition(layout, targets, tol);
}

namespace {

/// Clusters coordinates closer than eps into shared values.
class Axis {
 public:
  void build(std::vector<double> values, double eps, double lo, double hi) {
    values.push_back(lo);
    values.push_back(hi);
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    raw_ = values;
    id_.resize(raw_.size());
    std::vector<std::pair<double, int>> sums;  // (sum, count)
    for (std::size_t i = 0; i < raw_.size(); ++i) {
      if (i == 0 || raw_[i] - raw_[i - 1] > eps) sums.emplace_back(0.0, 0);
      id_[i] = static_cast<int>(sums.size()) - 1;
      sums.back().first += raw_[i];
      sums.back().second += 1;
    }
    value_.clear();
    for (const auto& [s, n] : sums) value_.push_back(s / n);
    value_[id(lo)] = lo;
    value_[id(hi)] = hi;
  }

  int id(double v) const {
    auto it = std::lower_bound(raw_.begin(), raw_.end(), v);
    if (it == raw_.end()) --it;
    if (it != raw_.begin() && std::abs(*(it - 1) - v) < std::abs(*it - v)) --it;
    return id_[it - raw_.begin()];
  }

  double value(int cluster) const { return value_[cluster]; }

 private:
  std::vector<double> raw_;
  std::vector<int> id_;
  std::vector<double> value_;
};

struct Fragment {
  int begin, end;  // cluster ids along the line
  int cell;        // index into layout.cells
  Side side;
};

struct Piece {
  int begin, end;
  int segment;
};

}  // namespace

SegmentGraph maximal_segments(const Layout& layout) {
  const Rect& b = layout.bounds;
  if (!(b.w > 0.0 && b.h > 0.0)) throw GeometryError("degenerate layout: zero-area input rectangle");
  const double eps = coordinate_epsilon(b);
  const std::size_t n = layout.cells.size();

  Axis ax, ay;
  {
    std::vector<double> xs, ys;
    xs.reserve(2 * n);
    ys.reserve(2 * n);
    for (const auto& c : layout.cells) {
      xs.push_back(c.rect.left());
      xs.push_back(c.rect.right());
      ys.push_back(c.rect.top());
      ys.push_back(c.rect.bottom());
    }
    ax.build(std::move(xs), eps, b.left(), b.right());
    ay.build(std::move(ys), eps, b.top(), b.bottom());
  }
  const int bx0 = ax.id(b.left()), bx1 = ax.id(b.right());
  const int by0 = ay.id(b.top()), by1 = ay.id(b.bottom());

  struct Ids {
    int l, r, t, bo;
  };
  std::vector<Ids> ids(n);
  std::map<int, std::vector<Fragment>> vlines, hlines;
  std::unordered_map<long long, std::array<int, 4>> corners;  // NW, NE, SW, SE
  const long long stride = 1LL << 32;
  auto corner = [&](int x, int y, int quadrant, int cell) {
    auto [it, fresh] = corners.try_emplace(static_cast<long long>(x) * stride + y, std::array<int, 4>{-1, -1, -1, -1});
    it->second[quadrant] = cell;
  };

  for (std::size_t i = 0; i < n; ++i) {
    const Rect& r = layout.cells[i].rect;
    Ids& d = ids[i];
    d = {ax.id(r.left()), ax.id(r.right()), ay.id(r.top()), ay.id(r.bottom())};
    if (d.l >= d.r || d.t >= d.bo)
      throw GeometryError("degenerate cell " + layout.name_of(layout.cells[i].id));
    int c = static_cast<int>(i);
    if (d.l != bx0) vlines[d.l].push_back({d.t, d.bo, c, Side::Left});
    if (d.r != bx1) vlines[d.r].push_back({d.t, d.bo, c, Side::Right});
    if (d.t != by0) hlines[d.t].push_back({d.l, d.r, c, Side::Top});
    if (d.bo != by1) hlines[d.bo].push_back({d.l, d.r, c, Side::Bottom});
    corner(d.l, d.t, 3, c);
    corner(d.r, d.t, 2, c);
    corner(d.l, d.bo, 1, c);
    corner(d.r, d.bo, 0, c);
  }

  auto lca = [&](int ci, int cj) {
    if (!layout.hierarchy) return 0;
    return layout.hierarchy->lca_depth(layout.cells[ci].id, layout.cells[cj].id);
  };

  // Where four cells meet, one of the two crossing lines is split.
  std::map<int, std::vector<int>> vcuts, hcuts;
  for (const auto& [key, q] : corners) {
    if (q[0] < 0 || q[1] < 0 || q[2] < 0 || q[3] < 0) continue;
    int x = static_cast<int>(key / stride);
    int y = static_cast<int>(key % stride);
    int dv = std::max(lca(q[0], q[1]), lca(q[2], q[3]));
    int dh = std::max(lca(q[0], q[2]), lca(q[1], q[3]));
    if (dh < dv) vcuts[x].push_back(y);
    else hcuts[y].push_back(x);
  }

  SegmentGraph g;
  g.bounds = b;
  std::map<int, std::vector<Piece>> vpieces, hpieces;

  auto build_line = [&](Orientation o, int line, std::vector<Fragment>& frags, std::vector<int> cuts,
                        std::vector<Piece>& pieces) {
    std::sort(frags.begin(), frags.end(), [](const Fragment& a, const Fragment& c) { return a.begin < c.begin; });
    std::sort(cuts.begin(), cuts.end());
    std::vector<std::pair<int, int>> runs;
    for (const auto& f : frags) {
      if (!runs.empty() && f.begin <= runs.back().second) runs.back().second = std::max(runs.back().second, f.end);
      else runs.emplace_back(f.begin, f.end);
    }
    for (auto [s, e] : runs) {
      int start = s;
      auto emit = [&](int from, int to) {
        MaximalSegment seg;
        seg.orientation = o;
        seg.coord = (o == Orientation::Vertical ? ax : ay).value(line);
        const Axis& along = (o == Orientation::Vertical ? ay : ax);
        seg.begin = along.value(from);
        seg.end = along.value(to);
        pieces.push_back({from, to, static_cast<int>(g.segments.size())});
        g.segments.push_back(std::move(seg));
      };
      for (int cut : cuts) {
        if (cut <= start || cut >= e) continue;
        emit(start, cut);
        start = cut;
      }
      emit(start, e);
    }
  };

  for (auto& [line, frags] : hlines) build_line(Orientation::Horizontal, line, frags, hcuts[line], hpieces[line]);
  for (auto& [line, frags] : vlines) build_line(Orientation::Vertical, line, frags, vcuts[line], vpieces[line]);

  auto locate = [&](const std::vector<Piece>& pieces, int a, int e) {
    auto it = std::upper_bound(pieces.begin(), pieces.end(), a,
                               [](int v, const Piece& p) { return v < p.begin; });
    if (it == pieces.begin()) throw GeometryError("cell side outside every segment");
    --it;
    if (it->end < e) throw GeometryError("cell side spans a segment split");
    return it->segment;
  };

  g.sides.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Ids& d = ids[i];
    CellSides& s = g.sides[i];
    s.id = layout.cells[i].id;
    s.ref[static_cast<int>(Side::Top)] = d.t == by0 ? kBoundaryTop : locate(hpieces[d.t], d.l, d.r);
    s.ref[static_cast<int>(Side::Bottom)] = d.bo == by1 ? kBoundaryBottom : locate(hpieces[d.bo], d.l, d.r);
    s.ref[static_cast<int>(Side::Left)] = d.l == bx0 ? kBoundaryLeft : locate(vpieces[d.l], d.t, d.bo);
    s.ref[static_cast<int>(Side::Right)] = d.r == bx1 ? kBoundaryRight : locate(vpieces[d.r], d.t, d.bo);
    for (int k = 0; k < 4; ++k)
      if (s.ref[k] >= 0) g.segments[s.ref[k]].incident.push_back({s.id, static_cast<Side>(k)});

    int top = s.ref[0], bottom = s.ref[1], left = s.ref[2], right = s.ref[3];
    if (top >= 0 && bottom >= 0) g.order_h.emplace_back(bottom, top);
    if (left >= 0 && right >= 0) g.order_v.emplace_back(left, right);
  }
  for (auto& seg : g.segments) std::sort(seg.incident.begin(), seg.incident.end());
  for (auto* order : {&g.order_h, &g.order_v}) {
    std::sort(order->begin(), order->end());
    order->erase(std::unique(order->begin(), order->end()), order->end());
  }
  return g;
}

namespace {

std::string segment_key(const Layout& layout, const MaximalSegment& seg) {
  std::vector<std::string> parts;
  parts.reserve(seg.incident.size());
  for (const auto& inc : seg.incident) parts.push_back(layout.name_of(inc.cell) + "/" + to_string(inc.side));
  std::sort(parts.begin(), parts.end());
  std::string key = seg.orientation == Orientation::Vertical ? "V" : "H";
  for (const auto& p : parts) key += "|" + p;
  return key;
}

}  // namespace

bool order_equivalent(const Layout& a, const Layout& b) {
  std::set<std::string> ia, ib;
  for (const auto& c : a.cells) ia.insert(a.name_of(c.id));
  for (const auto& c : b.cells) ib.insert(b.name_of(c.id));
  if (ia != ib) throw GeometryError("order_equivalent: leaf-id sets differ");

  SegmentGraph ga = maximal_segments(a);
  SegmentGraph gb = maximal_segments(b);
  if (ga.segments.size() != gb.segments.size()) return false;

  std::map<std::string, int> index_b;
  for (std::size_t i = 0; i < gb.segments.size(); ++i)
    index_b.emplace(segment_key(b, gb.segments[i]), static_cast<int>(i));
  std::vector<int> to_b(ga.segments.size());
  for (std::size_t i = 0; i < ga.segments.size(); ++i) {
    auto it = index_b.find(segment_key(a, ga.segments[i]));
    if (it == index_b.end()) return false;
    to_b[i] = it->second;
  }
  auto mapped = [&](const std::vector<std::pair<int, int>>& edges) {
    std::vector<std::pair<int, int>> out;
    out.reserve(edges.size());
    for (auto [s, t] : edges) out.emplace_back(to_b[s], to_b[t]);
    std::sort(out.begin(), out.end());
    return out;
  };
  return mapped(ga.order_h) == gb.order_h && mapped(ga.order_v) == gb.order_v;
}

}  // namespace treemap
