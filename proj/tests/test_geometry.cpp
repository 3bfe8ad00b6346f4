#include "treemap/geometry.hpp"
#include "treemap/stateless.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <random>

using namespace treemap;

namespace {

struct Named {
  std::string id;
  Rect rect;
};

Layout flat_layout(const std::vector<Named>& cells, Rect bounds = {0, 0, 1, 1}) {
  std::vector<std::string> ids;
  for (const auto& c : cells) ids.push_back(c.id);
  auto h = std::make_shared<Hierarchy>(Hierarchy::flat(ids));
  Layout layout;
  layout.bounds = bounds;
  layout.hierarchy = h;
  for (const auto& c : cells) layout.cells.push_back({h->find(c.id), c.rect});
  layout.rebuild_groups();
  return layout;
}

std::vector<std::pair<int, double>> own_areas(const Layout& layout) {
  std::vector<std::pair<int, double>> out;
  for (const auto& c : layout.cells) out.push_back({c.id, c.rect.area()});
  return out;
}

int count(const SegmentGraph& g, Orientation o) {
  return static_cast<int>(std::count_if(g.segments.begin(), g.segments.end(),
                                        [&](const MaximalSegment& s) { return s.orientation == o; }));
}

bool acyclic(std::size_t n, const std::vector<std::pair<int, int>>& edges) {
  std::vector<int> indegree(n, 0);
  std::vector<std::vector<int>> out(n);
  for (auto [a, b] : edges) {
    if (a == b) return false;
    out[a].push_back(b);
    ++indegree[b];
  }
  std::vector<int> ready;
  for (std::size_t i = 0; i < n; ++i)
    if (indegree[i] == 0) ready.push_back(static_cast<int>(i));
  std::size_t seen = 0;
  while (!ready.empty()) {
    int v = ready.back();
    ready.pop_back();
    ++seen;
    for (int w : out[v])
      if (--indegree[w] == 0) ready.push_back(w);
  }
  return seen == n;
}

Layout random_layout(std::mt19937_64& rng, Algorithm algorithm, int n, Rect bounds) {
  std::vector<std::string> ids;
  for (int i = 0; i < n; ++i) ids.push_back("c" + std::to_string(i));
  auto h = std::make_shared<Hierarchy>(Hierarchy::flat(ids));
  std::uniform_real_distribution<double> u(0.1, 10.0);
  LayoutRequest req{bounds, {}};
  for (int leaf : h->leaves()) req.items.push_back({leaf, u(rng)});
  auto rects = layout_items(algorithm, req, 0);
  Layout layout;
  layout.bounds = bounds;
  layout.hierarchy = h;
  for (std::size_t k = 0; k < rects.size(); ++k) layout.cells.push_back({req.items[k].id, rects[k]});
  layout.rebuild_groups();
  return layout;
}

}  // namespace

TEST(ValidateLayout, TwoHalvesPass) {
  auto layout = flat_layout({{"a", {0, 0, 0.5, 1}}, {"b", {0.5, 0, 0.5, 1}}});
  auto report = validate_partition(layout, {{layout.cells[0].id, 0.5}, {layout.cells[1].id, 0.5}});
  EXPECT_TRUE(report.passed);
  EXPECT_EQ(report.max_area_error, 0.0);
  EXPECT_EQ(report.max_overlap, 0.0);
  EXPECT_EQ(report.max_gap, 0.0);
}

TEST(ValidateLayout, OverlapIsMeasured) {
  auto layout = flat_layout({{"a", {0, 0, 0.51, 1}}, {"b", {0.5, 0, 0.5, 1}}});
  auto report = validate_partition(layout, own_areas(layout));
  EXPECT_FALSE(report.passed);
  EXPECT_NEAR(report.max_overlap, 0.01, 1e-12);
}

TEST(ValidateLayout, AreaErrorIsMeasured) {
  auto layout = flat_layout({{"a", {0, 0, 0.49, 1}}, {"b", {0.49, 0, 0.51, 1}}});
  int a = layout.hierarchy->find("a"), b = layout.hierarchy->find("b");
  auto report = validate_partition(layout, {{a, 0.5}, {b, 0.5}});
  EXPECT_FALSE(report.passed);
  EXPECT_NEAR(report.max_leaf_error, 0.02, 1e-12);
  EXPECT_NEAR(report.max_area_error, 0.01, 1e-12);
}

TEST(ValidateLayout, GapIsMeasured) {
  auto layout = flat_layout({{"a", {0, 0, 0.5, 1}}, {"b", {0.6, 0, 0.4, 1}}});
  auto report = validate_partition(layout, own_areas(layout));
  EXPECT_FALSE(report.passed);
  EXPECT_NEAR(report.max_gap, 0.1, 1e-12);
}

TEST(MaximalSegments, SingleVerticalCut) {
  auto g = maximal_segments(flat_layout({{"a", {0, 0, 0.5, 1}}, {"b", {0.5, 0, 0.5, 1}}}));
  ASSERT_EQ(g.segments.size(), 1u);
  EXPECT_EQ(g.segments[0].orientation, Orientation::Vertical);
  EXPECT_TRUE(g.order_h.empty());
  EXPECT_TRUE(g.order_v.empty());
}

TEST(MaximalSegments, RightHalfCut) {
  auto layout = flat_layout({{"a", {0, 0, 0.5, 1}}, {"b", {0.5, 0, 0.5, 0.5}}, {"c", {0.5, 0.5, 0.5, 0.5}}});
  auto g = maximal_segments(layout);
  ASSERT_EQ(g.segments.size(), 2u);
  EXPECT_EQ(count(g, Orientation::Vertical), 1);
  EXPECT_EQ(count(g, Orientation::Horizontal), 1);
  for (const auto& s : g.segments) {
    if (s.orientation != Orientation::Horizontal) continue;
    int b = layout.hierarchy->find("b"), c = layout.hierarchy->find("c");
    std::vector<Incidence> want{{b, Side::Bottom}, {c, Side::Top}};
    std::sort(want.begin(), want.end());
    EXPECT_EQ(s.incident, want);
    EXPECT_DOUBLE_EQ(s.begin, 0.5);
    EXPECT_DOUBLE_EQ(s.end, 1.0);
  }
}

TEST(MaximalSegments, SliceAndDiceGrid) {
  auto layout = flat_layout({{"a", {0, 0, 0.5, 0.5}},
                             {"b", {0, 0.5, 0.5, 0.5}},
                             {"c", {0.5, 0, 0.5, 0.5}},
                             {"d", {0.5, 0.5, 0.5, 0.5}}});
  auto g = maximal_segments(layout);
  EXPECT_EQ(g.segments.size(), 3u);
  EXPECT_EQ(count(g, Orientation::Vertical), 1);
  EXPECT_EQ(count(g, Orientation::Horizontal), 2);
  EXPECT_TRUE(g.order_h.empty());
  EXPECT_TRUE(g.order_v.empty());
}

TEST(MaximalSegments, GroupBoundaryPassesAtCrossing) {
  // Two rows, each a group of two cells: the row boundary must survive intact.
  Hierarchy nested;
  nested.ids = {"root", "g1", "a", "b", "g2", "c", "d"};
  nested.parent = {-1, 0, 1, 1, 0, 4, 4};
  nested.children = {{1, 4}, {2, 3}, {}, {}, {5, 6}, {}, {}};
  nested.finalize();
  auto hp = std::make_shared<Hierarchy>(nested);
  Layout layout;
  layout.bounds = {0, 0, 1, 1};
  layout.hierarchy = hp;
  layout.cells = {{2, {0, 0, 0.5, 0.5}}, {3, {0.5, 0, 0.5, 0.5}}, {5, {0, 0.5, 0.5, 0.5}}, {6, {0.5, 0.5, 0.5, 0.5}}};
  layout.rebuild_groups();
  auto g = maximal_segments(layout);
  EXPECT_EQ(count(g, Orientation::Horizontal), 1);
  EXPECT_EQ(count(g, Orientation::Vertical), 2);
}

TEST(MaximalSegments, OrderEdgesThroughMiddleRow) {
  // Three stacked rows: the middle cell sits between the two interior horizontals.
  auto layout = flat_layout({{"a", {0, 0, 1, 0.3}}, {"b", {0, 0.3, 1, 0.4}}, {"c", {0, 0.7, 1, 0.3}}});
  auto g = maximal_segments(layout);
  ASSERT_EQ(g.segments.size(), 2u);
  ASSERT_EQ(g.order_h.size(), 1u);
  auto [lower, upper] = g.order_h[0];
  EXPECT_GT(g.segments[lower].coord, g.segments[upper].coord);  // bottom side lies further down
}

TEST(MaximalSegments, DegenerateRootThrows) {
  Layout layout = flat_layout({{"a", {0, 0, 0, 0}}}, {0, 0, 0, 0});
  EXPECT_THROW(maximal_segments(layout), GeometryError);
}

TEST(OrderEquivalent, SmallExamples) {
  // Left: a vertical wall with the left side cut high and the right side cut low.
  auto left = flat_layout({{"a", {0, 0, 0.5, 0.4}},
                           {"b", {0, 0.4, 0.5, 0.6}},
                           {"c", {0.5, 0, 0.5, 0.6}},
                           {"d", {0.5, 0.6, 0.5, 0.4}}});
  // Middle: every wall moved, the combinatorics unchanged.
  auto middle = flat_layout({{"a", {0, 0, 0.3, 0.7}},
                             {"b", {0, 0.7, 0.3, 0.3}},
                             {"c", {0.3, 0, 0.7, 0.2}},
                             {"d", {0.3, 0.2, 0.7, 0.8}}});
  // Right: the horizontal wall now runs across and the vertical walls are split.
  auto right = flat_layout({{"a", {0, 0, 0.5, 0.5}},
                            {"b", {0, 0.5, 0.3, 0.5}},
                            {"c", {0.5, 0, 0.5, 0.5}},
                            {"d", {0.3, 0.5, 0.7, 0.5}}});
  EXPECT_TRUE(order_equivalent(left, left));
  EXPECT_TRUE(order_equivalent(left, middle));
  EXPECT_TRUE(order_equivalent(middle, left));
  EXPECT_FALSE(order_equivalent(left, right));
  EXPECT_FALSE(order_equivalent(middle, right));
}

TEST(OrderEquivalent, LeafMismatchThrows) {
  auto a = flat_layout({{"a", {0, 0, 0.5, 1}}, {"b", {0.5, 0, 0.5, 1}}});
  auto b = flat_layout({{"a", {0, 0, 0.5, 1}}, {"z", {0.5, 0, 0.5, 1}}});
  EXPECT_THROW(order_equivalent(a, b), GeometryError);
}

class SegmentProperties : public ::testing::TestWithParam<Algorithm> {};

TEST_P(SegmentProperties, IncidenceAndOrderInvariants) {
  std::mt19937_64 rng(1234 + static_cast<int>(GetParam()));
  for (int trial = 0; trial < 40; ++trial) {
    int n = 1 + static_cast<int>(rng() % 60);
    Rect bounds{0, 0, 800 + static_cast<double>(rng() % 400), 600 + static_cast<double>(rng() % 400)};
    auto layout = random_layout(rng, GetParam(), n, bounds);
    auto g = maximal_segments(layout);
    ASSERT_EQ(g.sides.size(), layout.cells.size());
    // Incidences counted from both ends agree.
    std::size_t from_segments = 0, from_cells = 0;
    for (const auto& s : g.segments) from_segments += s.incident.size();
    const double eps = coordinate_epsilon(bounds);
    for (std::size_t i = 0; i < layout.cells.size(); ++i) {
      const Rect& r = layout.cells[i].rect;
      for (int side = 0; side < 4; ++side) {
        int ref = g.sides[i].ref[side];
        if (ref >= 0) ++from_cells;
        bool on_boundary = (side == 0 && std::abs(r.top() - bounds.top()) < eps) ||
                           (side == 1 && std::abs(r.bottom() - bounds.bottom()) < eps) ||
                           (side == 2 && std::abs(r.left() - bounds.left()) < eps) ||
                           (side == 3 && std::abs(r.right() - bounds.right()) < eps);
        EXPECT_EQ(ref < 0, on_boundary);
      }
    }
    EXPECT_EQ(from_segments, from_cells);
    // Each interior segment has cells on both of its sides.
    for (const auto& s : g.segments) {
      bool before = false, after = false;
      for (const auto& inc : s.incident) {
        before |= inc.side == Side::Bottom || inc.side == Side::Right;
        after |= inc.side == Side::Top || inc.side == Side::Left;
      }
      EXPECT_TRUE(before && after);
    }
    EXPECT_TRUE(acyclic(g.segments.size(), g.order_h));
    EXPECT_TRUE(acyclic(g.segments.size(), g.order_v));
    // Reflexive, and invariant under uniform scaling.
    EXPECT_TRUE(order_equivalent(layout, layout));
    Layout scaled = layout;
    scaled.bounds = {bounds.x * 3, bounds.y * 3, bounds.w * 3, bounds.h * 3};
    for (auto& c : scaled.cells) c.rect = {c.rect.x * 3, c.rect.y * 3, c.rect.w * 3, c.rect.h * 3};
    scaled.rebuild_groups();
    EXPECT_TRUE(order_equivalent(layout, scaled));
    EXPECT_TRUE(order_equivalent(scaled, layout));
  }
}

INSTANTIATE_TEST_SUITE_P(Algorithms, SegmentProperties,
                         ::testing::Values(Algorithm::SliceAndDice, Algorithm::Squarified, Algorithm::Approximation,
                                           Algorithm::Strip, Algorithm::Split, Algorithm::PivotMiddle,
                                           Algorithm::Spiral, Algorithm::Hilbert, Algorithm::Moore),
                         [](const auto& info) { return std::string(short_name(info.param)); });

TEST(OrderEquivalent, SymmetricAcrossAlgorithms) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    int n = 2 + static_cast<int>(rng() % 12);
    std::mt19937_64 a_rng(trial), b_rng(trial);
    auto a = random_layout(a_rng, Algorithm::Squarified, n, {0, 0, 1, 1});
    auto b = random_layout(b_rng, Algorithm::Strip, n, {0, 0, 1, 1});
    EXPECT_EQ(order_equivalent(a, b), order_equivalent(b, a));
  }
}
