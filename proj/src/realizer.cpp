#include "treemap/realizer.hpp"

#include <Eigen/Sparse>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace treemap {

Dissection Dissection::from_layout(const Layout& layout, const SegmentGraph& graph) {
  Dissection d;
  d.bounds = layout.bounds;
  for (const auto& s : graph.segments) {
    d.orientation.push_back(s.orientation);
    d.position.push_back(s.coord);
  }
  for (std::size_t i = 0; i < layout.cells.size(); ++i) {
    d.refs.push_back(graph.sides[i].ref);
    d.ids.push_back(layout.cells[i].id);
  }
  return d;
}

double Dissection::coordinate(int ref, Side side) const {
  if (ref >= 0) return position[ref];
  switch (ref) {
    case kBoundaryTop: return bounds.top();
    case kBoundaryBottom: return bounds.bottom();
    case kBoundaryLeft: return bounds.left();
    case kBoundaryRight: return bounds.right();
    default: break;
  }
  (void)side;
  throw GeometryError("invalid segment reference");
}

Rect Dissection::cell_rect(std::size_t cell) const {
  const auto& r = refs[cell];
  double top = coordinate(r[0], Side::Top);
  double bottom = coordinate(r[1], Side::Bottom);
  double left = coordinate(r[2], Side::Left);
  double right = coordinate(r[3], Side::Right);
  return {left, top, right - left, bottom - top};
}

double relative_area_error(double area, double target, double root_area) {
  return std::abs(area - target) / std::max(target, 1e-9 * root_area);
}

namespace {

// Cells on either side of a segment: `before` cells end on it (right or
// bottom side), `after` cells start on it (left or top side).
struct SegmentCells {
  std::vector<int> before, after;
};

class Realizer {
 public:
  Realizer(Dissection& d, const std::vector<double>& targets, const RealizeOptions& opts)
      : d_(d), t_(targets), opts_(opts), root_area_(d.bounds.area()), cells_(d.num_segments()) {
    for (std::size_t c = 0; c < d.num_cells(); ++c) {
      const auto& r = d.refs[c];
      if (r[1] >= 0) cells_[r[1]].before.push_back(static_cast<int>(c));
      if (r[3] >= 0) cells_[r[3]].before.push_back(static_cast<int>(c));
      if (r[0] >= 0) cells_[r[0]].after.push_back(static_cast<int>(c));
      if (r[2] >= 0) cells_[r[2]].after.push_back(static_cast<int>(c));
    }
    order_.resize(d.num_segments());
    std::iota(order_.begin(), order_.end(), 0);
    std::stable_sort(order_.begin(), order_.end(), [&](int a, int b) {
      if (d.orientation[a] != d.orientation[b]) return d.orientation[a] == Orientation::Vertical;
      return d.position[a] < d.position[b];
    });
    if (opts.shuffle_seed) {
      std::mt19937_64 rng(*opts.shuffle_seed);
      std::shuffle(order_.begin(), order_.end(), rng);
    }
    scale_.resize(d.num_cells());
    for (std::size_t c = 0; c < d.num_cells(); ++c) scale_[c] = std::max(t_[c], 1e-9 * root_area_);
  }

  RealizeStats run() {
    RealizeStats stats;
    stats.max_rel_area_error = max_error();
    if (stats.max_rel_area_error <= opts_.tolerance || d_.num_segments() == 0) {
      stats.converged = stats.max_rel_area_error <= opts_.tolerance;
      return stats;
    }
    constexpr int kWarmupSweeps = 2;
    while (stats.iterations < opts_.max_iterations) {
      bool newton_ok = false;
      if (stats.iterations >= kWarmupSweeps) newton_ok = newton_step();
      if (!newton_ok) sweep();
      ++stats.iterations;
      stats.max_rel_area_error = max_error();
      if (stats.max_rel_area_error <= opts_.tolerance) {
        stats.converged = true;
        break;
      }
    }
    return stats;
  }

 private:
  double max_error() const {
    double worst = 0.0;
    for (std::size_t c = 0; c < d_.num_cells(); ++c)
      worst = std::max(worst, relative_area_error(d_.cell_area(c), t_[c], root_area_));
    return worst;
  }

  double weighted_residual() const {
    double acc = 0.0;
    for (std::size_t c = 0; c < d_.num_cells(); ++c) {
      double r = (d_.cell_area(c) - t_[c]) / scale_[c];
      acc += r * r;
    }
    return acc;
  }

  /// Thickness of a cell across the given segment's orientation, and its
  /// extent along it.
  std::pair<double, double> extents(int cell, Orientation o) const {
    Rect r = d_.cell_rect(cell);
    return o == Orientation::Vertical ? std::pair{r.w, r.h} : std::pair{r.h, r.w};
  }

  void sweep() {
    for (int s : order_) sweep_segment(s);
  }

  void sweep_segment(int s) {
    const Orientation o = d_.orientation[s];
    const double p = d_.position[s];
    // Before-side areas are (p - low) * len, after-side areas (high - p) * len.
    double t_before = 0.0, len_before = 0.0, c_before = 0.0, max_low = -INFINITY;
    double t_after = 0.0, len_after = 0.0, c_after = 0.0, min_high = INFINITY;
    for (int c : cells_[s].before) {
      auto [thick, len] = extents(c, o);
      double low = p - thick;
      t_before += t_[c];
      len_before += len;
      c_before += low * len;
      max_low = std::max(max_low, low);
    }
    for (int c : cells_[s].after) {
      auto [thick, len] = extents(c, o);
      double high = p + thick;
      t_after += t_[c];
      len_after += len;
      c_after += high * len;
      min_high = std::min(min_high, high);
    }
    if (t_before <= 0.0 || t_after <= 0.0) return;
    double next = (c_after / t_after + c_before / t_before) / (len_before / t_before + len_after / t_after);
    double lo = p - 0.9 * (p - max_low);
    double hi = p + 0.9 * (min_high - p);
    d_.position[s] = std::clamp(next, lo, hi);
  }

  bool newton_step() {
    const int n = static_cast<int>(d_.num_cells());
    const int k = static_cast<int>(d_.num_segments());
    std::vector<Rect> rects(n);
    Eigen::VectorXd r(n);
    for (int c = 0; c < n; ++c) {
      rects[c] = d_.cell_rect(c);
      r[c] = rects[c].area() - t_[c];
    }
    std::vector<Eigen::Triplet<double>> entries;
    entries.reserve(4 * n);
    auto add = [&](int row, int ref, double v) {
      if (ref >= 0) entries.emplace_back(row, ref, v);
    };

    Eigen::VectorXd delta;
    if (k == n - 1) {
      // The areas always sum to the root area, so one equation is implied;
      // drop the best-conditioned one.
      int dropped = static_cast<int>(std::max_element(t_.begin(), t_.end()) - t_.begin());
      Eigen::VectorXd rhs(k);
      int row = 0;
      for (int c = 0; c < n; ++c) {
        if (c == dropped) continue;
        const auto& ref = d_.refs[c];
        const Rect& q = rects[c];
        add(row, ref[0], -q.w);
        add(row, ref[1], q.w);
        add(row, ref[2], -q.h);
        add(row, ref[3], q.h);
        rhs[row] = -r[c];
        ++row;
      }
      Eigen::SparseMatrix<double> J(k, k);
      J.setFromTriplets(entries.begin(), entries.end());
      Eigen::SparseLU<Eigen::SparseMatrix<double>> solver;
      solver.compute(J);
      if (solver.info() != Eigen::Success) return false;
      delta = solver.solve(rhs);
      if (solver.info() != Eigen::Success) return false;
    } else {
      for (int c = 0; c < n; ++c) {
        const auto& ref = d_.refs[c];
        const Rect& q = rects[c];
        double w = 1.0 / scale_[c];
        add(c, ref[0], -q.w * w);
        add(c, ref[1], q.w * w);
        add(c, ref[2], -q.h * w);
        add(c, ref[3], q.h * w);
      }
      Eigen::SparseMatrix<double> J(n, k);
      J.setFromTriplets(entries.begin(), entries.end());
      Eigen::VectorXd rw(n);
      for (int c = 0; c < n; ++c) rw[c] = r[c] / scale_[c];
      Eigen::SparseMatrix<double> normal = J.transpose() * J;
      Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver;
      solver.compute(normal);
      if (solver.info() != Eigen::Success) return false;
      delta = solver.solve(-(J.transpose() * rw));
      if (solver.info() != Eigen::Success) return false;
    }
    if (!delta.allFinite()) return false;

    // No cell may lose more than 90% of its width or height in one step.
    double alpha = 1.0;
    auto move = [&](int ref) { return ref >= 0 ? delta[ref] : 0.0; };
    for (int c = 0; c < n; ++c) {
      const auto& ref = d_.refs[c];
      double dw = move(ref[3]) - move(ref[2]);
      double dh = move(ref[1]) - move(ref[0]);
      if (dw < 0.0) alpha = std::min(alpha, 0.9 * rects[c].w / -dw);
      if (dh < 0.0) alpha = std::min(alpha, 0.9 * rects[c].h / -dh);
    }
    const std::vector<double> start = d_.position;
    const double before = weighted_residual();
    for (int attempt = 0; attempt < 30; ++attempt) {
      for (int s = 0; s < k; ++s) d_.position[s] = start[s] + alpha * delta[s];
      if (weighted_residual() < before) return true;
      alpha *= 0.5;
    }
    d_.position = start;
    return false;
  }

  Dissection& d_;
  const std::vector<double>& t_;
  const RealizeOptions& opts_;
  double root_area_;
  std::vector<SegmentCells> cells_;
  std::vector<int> order_;
  std::vector<double> scale_;
};

}  // namespace

RealizeStats realize(Dissection& d, const std::vector<double>& targets, const RealizeOptions& opts) {
  if (targets.size() != d.num_cells()) throw GeometryError("realize: one target per cell required");
  return Realizer(d, targets, opts).run();
}

}  // namespace treemap
