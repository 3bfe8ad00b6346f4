#include "treemap/stateless.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace treemap {

std::vector<double> LayoutRequest::areas() const {
  std::vector<double> out;
  out.reserve(items.size());
  double total = 0.0;
  for (const auto& item : items) {
    if (!(item.area > 0.0)) throw std::invalid_argument("layout request item with non-positive area");
    out.push_back(item.area);
    total += item.area;
  }
  const double scale = rect.area() / total;
  for (double& a : out) a *= scale;
  return out;
}

namespace {

double sum(std::span<const double> a) { return std::accumulate(a.begin(), a.end(), 0.0); }

/// Proportional slices of `r` in the given order. Cut edges are computed from
/// prefix sums and the last edge is pinned to the rectangle's far side.
void slice_into(const Rect& r, std::span<const double> a, bool vertical_cuts, std::span<Rect> out) {
  const double total = sum(a);
  const double start = vertical_cuts ? r.x : r.y;
  const double length = vertical_cuts ? r.w : r.h;
  double prefix = 0.0;
  double edge = start;
  for (std::size_t i = 0; i < a.size(); ++i) {
    prefix += a[i];
    double next = (i + 1 == a.size()) ? start + length : start + length * (prefix / total);
    out[i] = vertical_cuts ? Rect{edge, r.y, next - edge, r.h} : Rect{r.x, edge, r.w, next - edge};
    edge = next;
  }
}

/// Splits `r` into a first part holding `fraction` of its area and the rest,
/// cutting perpendicular to the longer side.
std::pair<Rect, Rect> cut(const Rect& r, double fraction) {
  if (r.w >= r.h) {
    double w = r.w * fraction;
    return {{r.x, r.y, w, r.h}, {r.x + w, r.y, r.right() - (r.x + w), r.h}};
  }
  double h = r.h * fraction;
  return {{r.x, r.y, r.w, h}, {r.x, r.y + h, r.w, r.bottom() - (r.y + h)}};
}

std::vector<std::size_t> sorted_by_decreasing_area(std::span<const double> a) {
  std::vector<std::size_t> order(a.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return a[i] > a[j]; });
  return order;
}

double ratio(double w, double h) { return std::max(w / h, h / w); }

}  // namespace

std::vector<Rect> slice_and_dice(const LayoutRequest& req, int depth) {
  auto a = req.areas();
  std::vector<Rect> out(a.size());
  slice_into(req.rect, a, depth % 2 == 0, out);
  return out;
}

std::vector<Rect> squarified(const LayoutRequest& req) {
  auto a = req.areas();
  const std::size_t n = a.size();
  std::vector<Rect> out(n);
  auto order = sorted_by_decreasing_area(a);

  // Worst 1/rho of a row with total `s`, extreme areas hi/lo along side `side`.
  auto worst = [](double s, double hi, double lo, double side) {
    double side2 = side * side;
    return std::max(side2 * hi / (s * s), (s * s) / (side2 * lo));
  };

  Rect rest = req.rect;
  std::size_t i = 0;
  while (i < n) {
    const double side = std::min(rest.w, rest.h);
    double s = a[order[i]], hi = s, lo = s;
    double current = worst(s, hi, lo, side);
    std::size_t j = i + 1;
    for (; j < n; ++j) {
      double v = a[order[j]];
      double candidate = worst(s + v, std::max(hi, v), std::min(lo, v), side);
      if (candidate > current) break;
      s += v;
      hi = std::max(hi, v);
      lo = std::min(lo, v);
      current = candidate;
    }
    std::vector<double> row;
    for (std::size_t k = i; k < j; ++k) row.push_back(a[order[k]]);
    std::vector<Rect> cells(row.size());
    Rect band;
    if (rest.w >= rest.h) {
      double w = (j == n) ? rest.w : s / rest.h;
      band = {rest.x, rest.y, w, rest.h};
      rest = {rest.x + w, rest.y, rest.right() - (rest.x + w), rest.h};
      slice_into(band, row, false, cells);
    } else {
      double h = (j == n) ? rest.h : s / rest.w;
      band = {rest.x, rest.y, rest.w, h};
      rest = {rest.x, rest.y + h, rest.w, rest.bottom() - (rest.y + h)};
      slice_into(band, row, true, cells);
    }
    for (std::size_t k = i; k < j; ++k) out[order[k]] = cells[k - i];
    i = j;
  }
  return out;
}

namespace {

void approximate(const Rect& r, std::span<const double> a, std::span<const std::size_t> order,
                 std::vector<Rect>& out) {
  if (order.size() == 1) {
    out[order[0]] = r;
    return;
  }
  double total = 0.0;
  for (std::size_t i : order) total += a[i];
  if (a[order[0]] >= 2.0 / 3.0 * total) {
    auto [first, rest] = cut(r, a[order[0]] / total);
    out[order[0]] = first;
    approximate(rest, a, order.subspan(1), out);
    return;
  }
  std::size_t best = 0;
  double best_gap = 0.0, best_prefix = 0.0, prefix = 0.0;
  for (std::size_t k = 1; k < order.size(); ++k) {
    prefix += a[order[k - 1]];
    if (prefix < total / 3.0 || total - prefix < total / 3.0) continue;
    double gap = std::abs(prefix - total / 2.0);
    if (best == 0 || gap < best_gap) {
      best = k;
      best_gap = gap;
      best_prefix = prefix;
    }
  }
  if (best == 0) {
    // Floating-point edge: fall back to the most balanced prefix.
    prefix = 0.0;
    for (std::size_t k = 1; k < order.size(); ++k) {
      prefix += a[order[k - 1]];
      double gap = std::abs(prefix - total / 2.0);
      if (best == 0 || gap < best_gap) {
        best = k;
        best_gap = gap;
        best_prefix = prefix;
      }
    }
  }
  auto [first, rest] = cut(r, best_prefix / total);
  approximate(first, a, order.subspan(0, best), out);
  approximate(rest, a, order.subspan(best), out);
}

}  // namespace

std::vector<Rect> approximation(const LayoutRequest& req) {
  auto a = req.areas();
  std::vector<Rect> out(a.size());
  auto order = sorted_by_decreasing_area(a);
  approximate(req.rect, a, order, out);
  return out;
}

namespace {

/// Mean 1/rho of a strip of total `s` laid along a side of length `side`.
double strip_mean_ratio(std::span<const double> a, std::size_t from, std::size_t to, double side) {
  double s = 0.0;
  for (std::size_t k = from; k < to; ++k) s += a[k];
  double thickness = s / side;
  double acc = 0.0;
  for (std::size_t k = from; k < to; ++k) acc += ratio(a[k] / thickness, thickness);
  return acc / static_cast<double>(to - from);
}

/// End index of the strip starting at `from`: items are admitted while the
/// mean ratio strictly improves.
std::size_t admit_strip(std::span<const double> a, std::size_t from, double side) {
  std::size_t to = from + 1;
  double current = strip_mean_ratio(a, from, to, side);
  while (to < a.size()) {
    double candidate = strip_mean_ratio(a, from, to + 1, side);
    if (!(candidate < current)) break;
    current = candidate;
    ++to;
  }
  return to;
}

}  // namespace

std::vector<Rect> strip(const LayoutRequest& req) {
  auto a = req.areas();
  const std::size_t n = a.size();
  std::vector<Rect> out(n);
  Rect rest = req.rect;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = admit_strip(a, i, rest.w);
    double s = 0.0;
    for (std::size_t k = i; k < j; ++k) s += a[k];
    double h = (j == n) ? rest.h : s / rest.w;
    Rect band{rest.x, rest.y, rest.w, h};
    rest = {rest.x, rest.y + h, rest.w, rest.bottom() - (rest.y + h)};
    slice_into(band, std::span<const double>(a).subspan(i, j - i), true, std::span<Rect>(out).subspan(i, j - i));
    i = j;
  }
  return out;
}

namespace {

void split_range(const Rect& r, std::span<const double> a, std::span<Rect> out) {
  if (a.size() == 1) {
    out[0] = r;
    return;
  }
  const double total = sum(a);
  std::size_t best = 1;
  double best_gap = 0.0, prefix = 0.0, best_prefix = 0.0;
  for (std::size_t k = 1; k < a.size(); ++k) {
    prefix += a[k - 1];
    double gap = std::abs(total - 2.0 * prefix);
    if (k == 1 || gap < best_gap) {
      best = k;
      best_gap = gap;
      best_prefix = prefix;
    }
  }
  auto [first, rest] = cut(r, best_prefix / total);
  split_range(first, a.subspan(0, best), out.subspan(0, best));
  split_range(rest, a.subspan(best), out.subspan(best));
}

}  // namespace

std::vector<Rect> split(const LayoutRequest& req) {
  auto a = req.areas();
  std::vector<Rect> out(a.size());
  split_range(req.rect, a, out);
  return out;
}

int select_pivot(std::span<const double> areas, PivotRule rule) {
  if (areas.empty()) throw std::invalid_argument("select_pivot on empty list");
  const int n = static_cast<int>(areas.size());
  switch (rule) {
    case PivotRule::Middle:
      return n / 2;
    case PivotRule::Size:
      return static_cast<int>(std::max_element(areas.begin(), areas.end()) - areas.begin());
    case PivotRule::Split: {
      const double total = sum(areas);
      int best = 0;
      double best_gap = 0.0, before = 0.0;
      for (int k = 0; k < n; ++k) {
        double after = total - before - areas[k];
        double gap = std::abs(before - after);
        if (k == 0 || gap < best_gap) {
          best = k;
          best_gap = gap;
        }
        before += areas[k];
      }
      return best;
    }
  }
  return 0;
}

namespace {

void pivot_range(const Rect& r, std::span<const double> a, PivotRule rule, std::span<Rect> out) {
  const std::size_t n = a.size();
  if (n == 0) return;
  if (n <= 3) {
    slice_into(r, a, r.w >= r.h, out);
    return;
  }
  const std::size_t p = static_cast<std::size_t>(select_pivot(a, rule));
  const double total = sum(a);
  const bool wide = r.w >= r.h;

  double before = 0.0;
  for (std::size_t k = 0; k < p; ++k) before += a[k];
  Rect r1{}, rest = r;
  if (p > 0) std::tie(r1, rest) = wide ? std::pair{Rect{r.x, r.y, r.w * before / total, r.h}, Rect{}}
                                       : std::pair{Rect{r.x, r.y, r.w, r.h * before / total}, Rect{}};
  if (p > 0) {
    rest = wide ? Rect{r1.right(), r.y, r.right() - r1.right(), r.h}
                : Rect{r.x, r1.bottom(), r.w, r.bottom() - r1.bottom()};
  }
  const double rest_area = total - before;

  // Choose the end of the list sharing the pivot's band so that the pivot is
  // as square as possible.
  std::size_t best_m = p + 1;
  double best_rho = -1.0;
  double band_area = a[p];
  for (std::size_t m = p + 1; m <= n; ++m) {
    if (m > p + 1) band_area += a[m - 1];
    double thickness = wide ? rest.w * band_area / rest_area : rest.h * band_area / rest_area;
    double along = wide ? rest.h : rest.w;
    double pivot_len = along * a[p] / band_area;
    double rho = std::min(thickness, pivot_len) / std::max(thickness, pivot_len);
    if (rho > best_rho) {
      best_rho = rho;
      best_m = m;
    }
  }
  double band = a[p];
  for (std::size_t k = p + 1; k < best_m; ++k) band += a[k];
  Rect band_rect, r3;
  if (wide) {
    double w = (best_m == n) ? rest.w : rest.w * band / rest_area;
    band_rect = {rest.x, rest.y, w, rest.h};
    r3 = {rest.x + w, rest.y, rest.right() - (rest.x + w), rest.h};
  } else {
    double h = (best_m == n) ? rest.h : rest.h * band / rest_area;
    band_rect = {rest.x, rest.y, rest.w, h};
    r3 = {rest.x, rest.y + h, rest.w, rest.bottom() - (rest.y + h)};
  }
  // Pivot first, then the items sharing its band, stacked across the band.
  Rect pivot_rect, r2;
  if (best_m == p + 1) {
    pivot_rect = band_rect;
  } else if (wide) {
    double h = band_rect.h * a[p] / band;
    pivot_rect = {band_rect.x, band_rect.y, band_rect.w, h};
    r2 = {band_rect.x, band_rect.y + h, band_rect.w, band_rect.bottom() - (band_rect.y + h)};
  } else {
    double w = band_rect.w * a[p] / band;
    pivot_rect = {band_rect.x, band_rect.y, w, band_rect.h};
    r2 = {band_rect.x + w, band_rect.y, band_rect.right() - (band_rect.x + w), band_rect.h};
  }
  out[p] = pivot_rect;
  pivot_range(r1, a.subspan(0, p), rule, out.subspan(0, p));
  pivot_range(r2, a.subspan(p + 1, best_m - p - 1), rule, out.subspan(p + 1, best_m - p - 1));
  pivot_range(r3, a.subspan(best_m), rule, out.subspan(best_m));
}

}  // namespace

std::vector<Rect> pivot(const LayoutRequest& req, PivotRule rule) {
  auto a = req.areas();
  std::vector<Rect> out(a.size());
  pivot_range(req.rect, a, rule, out);
  return out;
}

std::vector<Rect> spiral(const LayoutRequest& req) {
  auto a = req.areas();
  const std::size_t n = a.size();
  std::vector<Rect> out(n);
  Rect rest = req.rect;
  std::size_t i = 0;
  int direction = 0;  // 0 east (top), 1 south (right), 2 west (bottom), 3 north (left)
  while (i < n) {
    const bool horizontal_strip = direction % 2 == 0;
    const double side = horizontal_strip ? rest.w : rest.h;
    std::size_t j = admit_strip(a, i, side);
    double s = 0.0;
    for (std::size_t k = i; k < j; ++k) s += a[k];
    const bool last = j == n;
    Rect band;
    switch (direction) {
      case 0: {
        double h = last ? rest.h : s / rest.w;
        band = {rest.x, rest.y, rest.w, h};
        rest = {rest.x, rest.y + h, rest.w, rest.bottom() - (rest.y + h)};
        break;
      }
      case 1: {
        double w = last ? rest.w : s / rest.h;
        band = {rest.right() - w, rest.y, w, rest.h};
        rest = {rest.x, rest.y, band.x - rest.x, rest.h};
        break;
      }
      case 2: {
        double h = last ? rest.h : s / rest.w;
        band = {rest.x, rest.bottom() - h, rest.w, h};
        rest = {rest.x, rest.y, rest.w, band.y - rest.y};
        break;
      }
      default: {
        double w = last ? rest.w : s / rest.h;
        band = {rest.x, rest.y, w, rest.h};
        rest = {rest.x + w, rest.y, rest.right() - (rest.x + w), rest.h};
        break;
      }
    }
    std::vector<double> row(a.begin() + i, a.begin() + j);
    std::vector<Rect> cells(row.size());
    // West and north strips run against the reading direction.
    if (direction >= 2) std::reverse(row.begin(), row.end());
    slice_into(band, row, horizontal_strip, cells);
    if (direction >= 2) std::reverse(cells.begin(), cells.end());
    for (std::size_t k = i; k < j; ++k) out[k] = cells[k - i];
    i = j;
    direction = (direction + 1) % 4;
  }
  return out;
}

namespace {

// Quadrant corners: cx 0 = left, 1 = right; cy 0 = top, 1 = bottom.
struct Corner {
  int cx, cy;
  friend bool operator==(const Corner&, const Corner&) = default;
};

/// A curve pass through a rectangle, entering near `entry` and leaving near
/// `exit` (adjacent corners).
struct CurveState {
  Corner entry, exit;
};

struct QuadrantPlan {
  std::array<Corner, 4> quadrant;
  std::array<CurveState, 4> sub;
};

QuadrantPlan hilbert_plan(CurveState s) {
  const bool same_column = s.entry.cx == s.exit.cx;
  Corner q2 = same_column ? Corner{1 - s.entry.cx, s.entry.cy} : Corner{s.entry.cx, 1 - s.entry.cy};
  Corner q3 = same_column ? Corner{1 - s.exit.cx, s.exit.cy} : Corner{s.exit.cx, 1 - s.exit.cy};
  return {{s.entry, q2, q3, s.exit},
          {CurveState{s.entry, q2}, CurveState{s.entry, s.exit}, CurveState{s.entry, s.exit},
           CurveState{q3, s.exit}}};
}

constexpr Corner kTL{0, 0}, kTR{1, 0}, kBL{0, 1}, kBR{1, 1};
constexpr CurveState kBaseState{kBL, kBR};

/// Closed-loop top level: two upward passes on the left, two downward passes
/// on the right.
QuadrantPlan moore_plan() {
  return {{kBL, kTL, kTR, kBR},
          {CurveState{kBR, kTR}, CurveState{kBR, kTR}, CurveState{kTL, kBL}, CurveState{kTL, kBL}}};
}

std::array<std::size_t, 3> quarter_cuts(std::span<const double> a) {
  const std::size_t n = a.size();
  std::vector<double> prefix(n + 1, 0.0);
  for (std::size_t k = 0; k < n; ++k) prefix[k + 1] = prefix[k] + a[k];
  const double total = prefix[n];
  std::array<std::size_t, 3> cuts{};
  std::size_t from = 0;
  for (int q = 1; q <= 3; ++q) {
    double target = total * q / 4.0;
    std::size_t best = from;
    for (std::size_t k = from; k <= n; ++k)
      if (std::abs(prefix[k] - target) < std::abs(prefix[best] - target)) best = k;
    cuts[q - 1] = best;
    from = best;
  }
  return cuts;
}

void place_pair(const Rect& r, Corner first, double w1, double w2, bool stacked, Rect& r1, Rect& r2) {
  // Two quadrant cells sharing a half; `stacked` means one above the other.
  if (w1 <= 0.0) {
    r2 = r;
    return;
  }
  if (w2 <= 0.0) {
    r1 = r;
    return;
  }
  if (stacked) {
    double h = r.h * w1 / (w1 + w2);
    if (first.cy == 0) {
      r1 = {r.x, r.y, r.w, h};
      r2 = {r.x, r.y + h, r.w, r.bottom() - (r.y + h)};
    } else {
      double h2 = r.h - h;
      r2 = {r.x, r.y, r.w, h2};
      r1 = {r.x, r.y + h2, r.w, r.bottom() - (r.y + h2)};
    }
  } else {
    double w = r.w * w1 / (w1 + w2);
    if (first.cx == 0) {
      r1 = {r.x, r.y, w, r.h};
      r2 = {r.x + w, r.y, r.right() - (r.x + w), r.h};
    } else {
      double w2len = r.w - w;
      r2 = {r.x, r.y, w2len, r.h};
      r1 = {r.x + w2len, r.y, r.right() - (r.x + w2len), r.h};
    }
  }
}

void curve_layout(const Rect& r, std::span<const double> a, const QuadrantPlan& plan, std::span<Rect> out) {
  const std::size_t n = a.size();
  if (n == 1) {
    out[0] = r;
    return;
  }
  auto cuts = quarter_cuts(a);
  std::array<std::size_t, 5> bounds{0, cuts[0], cuts[1], cuts[2], n};
  int non_empty = 0;
  for (int q = 0; q < 4; ++q) non_empty += bounds[q + 1] > bounds[q];
  if (non_empty < 2) {
    // Degenerate quartering: fall back to the most balanced two-way split.
    double total = sum(a), prefix = 0.0, best_gap = 0.0;
    std::size_t best = 1;
    for (std::size_t k = 1; k < n; ++k) {
      prefix += a[k - 1];
      double gap = std::abs(total - 2.0 * prefix);
      if (k == 1 || gap < best_gap) {
        best = k;
        best_gap = gap;
      }
    }
    bounds = {0, best, n, n, n};
  }
  std::array<double, 4> weight{};
  for (int q = 0; q < 4; ++q)
    for (std::size_t k = bounds[q]; k < bounds[q + 1]; ++k) weight[q] += a[k];

  const auto& quad = plan.quadrant;
  // The first two quadrants form one half of the rectangle.
  const bool halves_are_columns = quad[0].cx == quad[1].cx;
  const double wa = weight[0] + weight[1], wb = weight[2] + weight[3];
  Rect half_a = r, half_b = r;
  if (wa > 0.0 && wb > 0.0) {
    if (halves_are_columns) {
      double w = r.w * wa / (wa + wb);
      if (quad[0].cx == 0) {
        half_a = {r.x, r.y, w, r.h};
        half_b = {r.x + w, r.y, r.right() - (r.x + w), r.h};
      } else {
        double wl = r.w - w;
        half_b = {r.x, r.y, wl, r.h};
        half_a = {r.x + wl, r.y, r.right() - (r.x + wl), r.h};
      }
    } else {
      double h = r.h * wa / (wa + wb);
      if (quad[0].cy == 0) {
        half_a = {r.x, r.y, r.w, h};
        half_b = {r.x, r.y + h, r.w, r.bottom() - (r.y + h)};
      } else {
        double ht = r.h - h;
        half_b = {r.x, r.y, r.w, ht};
        half_a = {r.x, r.y + ht, r.w, r.bottom() - (r.y + ht)};
      }
    }
  }
  std::array<Rect, 4> qr{};
  // Within a column half the quadrants are stacked; within a row half they
  // sit side by side.
  if (wa > 0.0) place_pair(half_a, quad[0], weight[0], weight[1], halves_are_columns, qr[0], qr[1]);
  if (wb > 0.0) place_pair(half_b, quad[2], weight[2], weight[3], halves_are_columns, qr[2], qr[3]);
  for (int q = 0; q < 4; ++q) {
    std::size_t len = bounds[q + 1] - bounds[q];
    if (len == 0) continue;
    curve_layout(qr[q], a.subspan(bounds[q], len), hilbert_plan(plan.sub[q]), out.subspan(bounds[q], len));
  }
}

}  // namespace

std::vector<Rect> space_filling(const LayoutRequest& req, Curve curve) {
  auto a = req.areas();
  std::vector<Rect> out(a.size());
  curve_layout(req.rect, a, curve == Curve::Hilbert ? hilbert_plan(kBaseState) : moore_plan(), out);
  return out;
}

std::vector<Rect> layout_items(Algorithm algorithm, const LayoutRequest& req, int depth) {
  if (req.items.empty()) return {};
  switch (algorithm) {
    case Algorithm::SliceAndDice: return slice_and_dice(req, depth);
    case Algorithm::Squarified: return squarified(req);
    case Algorithm::Approximation: return approximation(req);
    case Algorithm::Strip: return strip(req);
    case Algorithm::Split: return split(req);
    case Algorithm::PivotMiddle: return pivot(req, PivotRule::Middle);
    case Algorithm::PivotSize: return pivot(req, PivotRule::Size);
    case Algorithm::PivotSplit: return pivot(req, PivotRule::Split);
    case Algorithm::Spiral: return spiral(req);
    case Algorithm::Hilbert: return space_filling(req, Curve::Hilbert);
    case Algorithm::Moore: return space_filling(req, Curve::Moore);
    default: break;
  }
  throw std::invalid_argument("layout_items: " + std::string(short_name(algorithm)) + " is state-aware");
}

void layout_subtree(const Hierarchy& hierarchy, int node, const Rect& rect, std::span<const double> area,
                    Algorithm algorithm, std::vector<Cell>& cells) {
  if (hierarchy.is_leaf(node)) {
    cells.push_back({node, rect});
    return;
  }
  LayoutRequest req{rect, {}};
  for (int c : hierarchy.children[node])
    if (area[c] > 0.0) req.items.push_back({c, area[c]});
  auto rects = layout_items(algorithm, req, hierarchy.depth[node]);
  for (std::size_t k = 0; k < rects.size(); ++k)
    layout_subtree(hierarchy, req.items[k].id, rects[k], area, algorithm, cells);
}

Layout layout_step(std::shared_ptr<const Hierarchy> hierarchy, const NormalizedStep& step, Algorithm algorithm,
                   const Rect& bounds) {
  Layout layout;
  layout.bounds = bounds;
  layout.hierarchy = hierarchy;
  std::vector<double> area = step.area;
  // Rescale to the actual rectangle in case it differs from the step's area.
  if (step.total_area > 0.0 && std::abs(step.total_area - bounds.area()) > 1e-12 * bounds.area())
    for (double& a : area) a *= bounds.area() / step.total_area;
  layout_subtree(*hierarchy, hierarchy->root, bounds, area, algorithm, layout.cells);
  layout.rebuild_groups();
  return layout;
}

}  // namespace treemap
