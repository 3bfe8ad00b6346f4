#include "treemap/model.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <string>

using namespace treemap;

namespace {

const char* kSmall = R"({"name":"small","num_timesteps":2,"nodes":[
  {"id":"r","parent":null},
  {"id":"a","parent":"r","weights":[1,2]},
  {"id":"b","parent":"r","weights":[1,2]},
  {"id":"c","parent":"r","weights":[2,0]}]})";

std::string expect_error(const std::string& text) {
  try {
    parse_dataset(text);
  } catch (const DatasetError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(ParseDataset, ThreeLeavesWithDeletion) {
  auto tree = parse_dataset(kSmall);
  EXPECT_EQ(tree.name, "small");
  EXPECT_EQ(tree.num_timesteps, 2);
  const auto& h = *tree.hierarchy;
  ASSERT_EQ(h.leaves().size(), 3u);
  int c = h.find("c");
  EXPECT_TRUE(tree.alive(c, 0));
  EXPECT_FALSE(tree.alive(c, 1));
  EXPECT_DOUBLE_EQ(tree.weight(h.root, 0), 4.0);
  EXPECT_DOUBLE_EQ(tree.weight(h.root, 1), 4.0);
  EXPECT_EQ(tree.alive_leaves(1).size(), 2u);
}

TEST(ParseDataset, RejectsMultipleRoots) {
  auto msg = expect_error(R"({"name":"x","num_timesteps":1,"nodes":[
    {"id":"r","parent":null},{"id":"s","parent":null},
    {"id":"a","parent":"r","weights":[1]}]})");
  EXPECT_NE(msg.find("multiple roots"), std::string::npos) << msg;
}

TEST(ParseDataset, RejectsLengthMismatch) {
  auto msg = expect_error(R"({"name":"x","num_timesteps":2,"nodes":[
    {"id":"r","parent":null},{"id":"a","parent":"r","weights":[1,2,3]}]})");
  EXPECT_NE(msg.find("length mismatch"), std::string::npos) << msg;
}

TEST(ParseDataset, RejectsOtherViolations) {
  EXPECT_NE(expect_error("{not json"), "");
  EXPECT_NE(expect_error(R"({"name":"x","num_timesteps":1,"nodes":[
    {"id":"r","parent":null},{"id":"a","parent":"r","weights":[1]},
    {"id":"a","parent":"r","weights":[1]}]})").find("duplicate"), std::string::npos);
  EXPECT_NE(expect_error(R"({"name":"x","num_timesteps":1,"nodes":[
    {"id":"r","parent":null},{"id":"a","parent":"r","weights":[-1]}]})"), "");
  EXPECT_NE(expect_error(R"({"name":"x","num_timesteps":2,"nodes":[
    {"id":"r","parent":null},{"id":"a","parent":"r","weights":[1,0]}]})").find("all-zero"),
            std::string::npos);
  EXPECT_NE(expect_error(R"({"name":"x","num_timesteps":1,"nodes":[
    {"id":"r","parent":null},{"id":"a","parent":"q","weights":[1]}]})"), "");
  EXPECT_NE(expect_error(R"({"name":"x","num_timesteps":1,"nodes":[
    {"id":"r","parent":null},{"id":"a","parent":"b","weights":[1]},
    {"id":"b","parent":"a"}]})"), "");
}

TEST(ParseDataset, LeavesDeadThroughoutAreAccepted) {
  auto tree = parse_dataset(R"({"name":"x","num_timesteps":2,"nodes":[
    {"id":"r","parent":null},{"id":"a","parent":"r","weights":[1,1]},
    {"id":"z","parent":"r","weights":[0,0]}]})");
  EXPECT_EQ(tree.alive_leaves(0).size(), 1u);
}

TEST(ParseDataset, RoundTripIsCanonical) {
  auto tree = parse_dataset(kSmall);
  auto once = serialize_dataset(tree);
  auto twice = serialize_dataset(parse_dataset(once));
  EXPECT_EQ(once, twice);
  EXPECT_EQ(once.find(' '), std::string::npos);
  EXPECT_EQ(once.rfind(R"({"name":"small","num_timesteps":2,"nodes":[{"id":"r","parent":null})", 0), 0u);
}

TEST(NormalizeStep, ProportionalScaling) {
  auto tree = parse_dataset(R"({"name":"x","num_timesteps":1,"nodes":[
    {"id":"r","parent":null},{"id":"a","parent":"r","weights":[2]},
    {"id":"b","parent":"r","weights":[3]},{"id":"c","parent":"r","weights":[5]}]})");
  auto step = normalize_step(tree, 0, 1.0);
  const auto& h = *tree.hierarchy;
  EXPECT_NEAR(step.area[h.find("a")], 0.2, 1e-15);
  EXPECT_NEAR(step.area[h.find("b")], 0.3, 1e-15);
  EXPECT_NEAR(step.area[h.find("c")], 0.5, 1e-15);
  EXPECT_DOUBLE_EQ(step.area[h.root], 1.0);
}

TEST(NormalizeStep, SingleLeafLargeRect) {
  auto tree = parse_dataset(R"({"name":"x","num_timesteps":1,"nodes":[
    {"id":"r","parent":null},{"id":"a","parent":"r","weights":[1]}]})");
  auto step = normalize_step(tree, 0, 1e6);
  EXPECT_DOUBLE_EQ(step.area[tree.hierarchy->find("a")], 1e6);
}

TEST(NormalizeStep, ZeroTotalIsAnError) {
  // Bypass parse-time validation to reach the precondition check.
  TimeVaryingTree tree;
  tree.name = "zero";
  tree.num_timesteps = 1;
  auto h = std::make_shared<Hierarchy>(Hierarchy::flat({"a", "b"}));
  tree.hierarchy = h;
  tree.weights.assign(h->size(), {});
  tree.weights[h->find("a")] = {0.0};
  tree.weights[h->find("b")] = {0.0};
  EXPECT_THROW(normalize_step(tree, 0, 1.0), DatasetError);
  EXPECT_THROW(normalize_step(tree, 3, 1.0), DatasetError);
}

TEST(NormalizeStep, SumsToRectAreaOnRandomTrees) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 100.0);
  for (int trial = 0; trial < 50; ++trial) {
    int n = 2 + static_cast<int>(rng() % 200);
    std::vector<std::string> ids;
    for (int i = 0; i < n; ++i) ids.push_back("L" + std::to_string(i));
    TimeVaryingTree tree;
    tree.num_timesteps = 3;
    auto h = std::make_shared<Hierarchy>(Hierarchy::flat(ids));
    tree.hierarchy = h;
    tree.weights.assign(h->size(), {});
    for (int leaf : h->leaves())
      for (int t = 0; t < 3; ++t) tree.weights[leaf].push_back(rng() % 4 == 0 ? 0.0 : u(rng));
    for (int t = 0; t < 3; ++t) {
      if (tree.total_weight(t) <= 0.0) continue;
      double rect_area = 1.0 + u(rng) * 1e4;
      auto step = normalize_step(tree, t, rect_area);
      double total = 0.0;
      for (int leaf : h->leaves()) total += step.area[leaf];
      EXPECT_NEAR(total, rect_area, 1e-9 * rect_area);
    }
  }
}

TEST(Hierarchy, LcaDepth) {
  auto tree = parse_dataset(R"({"name":"x","num_timesteps":1,"nodes":[
    {"id":"r","parent":null},{"id":"g","parent":"r"},
    {"id":"a","parent":"g","weights":[1]},{"id":"b","parent":"g","weights":[1]},
    {"id":"c","parent":"r","weights":[1]}]})");
  const auto& h = *tree.hierarchy;
  EXPECT_EQ(h.lca_depth(h.find("a"), h.find("b")), 1);
  EXPECT_EQ(h.lca_depth(h.find("a"), h.find("c")), 0);
  EXPECT_TRUE(h.is_ancestor(h.find("g"), h.find("a")));
  EXPECT_FALSE(h.is_ancestor(h.find("g"), h.find("c")));
  EXPECT_DOUBLE_EQ(tree.weight(h.find("g"), 0), 2.0);
}
