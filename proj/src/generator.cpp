#include "treemap/generator.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace treemap {

namespace {

struct Params {
  double log_sd = 0.5;       // spread of the per-leaf base weights
  double noise = 0.02;       // per-step log-weight innovation
  double churn = 0.0;        // target insertion/deletion impact per step
  double small_scale = 0.05; // weight of churning leaves relative to the rest
};

int target_depth(Levels l, std::mt19937_64& rng) {
  switch (l) {
    case Levels::One: return 1;
    case Levels::TwoThree: return std::uniform_int_distribution<int>(2, 3)(rng);
    case Levels::FourPlus: return 4;
  }
  return 1;
}

void add_node(Hierarchy& h, int parent, std::string id) {
  int n = static_cast<int>(h.ids.size());
  h.ids.push_back(std::move(id));
  h.parent.push_back(parent);
  h.children.emplace_back();
  if (parent >= 0) h.children[parent].push_back(n);
}

// Splits `count` leaves under `node` into roughly count^(1/levels) groups.
// The first group always nests further so the tree reaches the full depth.
void nest(Hierarchy& h, int node, int count, int levels, int& next_leaf) {
  if (levels <= 1) {
    for (int i = 0; i < count; ++i) add_node(h, node, "l" + std::to_string(next_leaf++));
    return;
  }
  int groups = std::clamp(static_cast<int>(std::lround(std::pow(count, 1.0 / levels))), 2, std::max(2, count));
  groups = std::min(groups, count);
  if (groups < 1) groups = 1;
  for (int g = 0; g < groups; ++g) {
    int size = count / groups + (g < count % groups ? 1 : 0);
    if (size == 1 && g > 0) {
      add_node(h, node, "l" + std::to_string(next_leaf++));
      continue;
    }
    add_node(h, node, h.ids[node] + "." + std::to_string(g));
    nest(h, static_cast<int>(h.ids.size()) - 1, size, levels - 1, next_leaf);
  }
}

TimeVaryingTree attempt(const DataClass& target, int leaves, int timesteps, const Params& p, std::mt19937_64& rng) {
  auto h = std::make_shared<Hierarchy>();
  add_node(*h, -1, "g");
  int next_leaf = 0;
  nest(*h, 0, leaves, target_depth(target.levels, rng), next_leaf);
  h->root = 0;
  h->finalize();

  TimeVaryingTree tree;
  tree.name = "synthetic";
  tree.num_timesteps = timesteps;
  tree.hierarchy = h;
  tree.weights.assign(h->size(), {});
  const auto leaf_ids = h->leaves();
  const int n = static_cast<int>(leaf_ids.size());

  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> base(n), dev(n, 0.0);
  for (double& b : base) b = p.log_sd * normal(rng);

  // Alive bookkeeping. Without churn every leaf lives throughout; otherwise
  // a quarter starts dead and a fifth of the living may die.
  std::vector<char> alive(n, 1), core(n, 1);
  if (p.churn > 0.0) {
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), rng);
    int initially_alive = std::max(2, static_cast<int>(std::lround(0.75 * n)));
    int core_count = std::max(1, static_cast<int>(std::lround(0.8 * initially_alive)));
    for (int i = 0; i < n; ++i) {
      alive[order[i]] = i < initially_alive;
      core[order[i]] = i < core_count;
    }
  }
  double carry = 0.5;
  for (int t = 0; t < timesteps; ++t) {
    if (t > 0) {
      for (int i = 0; i < n; ++i) dev[i] = 0.5 * dev[i] + p.noise * normal(rng);
      if (p.churn > 0.0) {
        std::vector<int> mortal, dead;
        int living = 0;
        for (int i = 0; i < n; ++i) {
          living += alive[i];
          if (alive[i] && !core[i]) mortal.push_back(i);
          if (!alive[i]) dead.push_back(i);
        }
        carry += p.churn * living / 2.0;
        int events = static_cast<int>(std::floor(carry));
        carry -= events;
        std::shuffle(mortal.begin(), mortal.end(), rng);
        std::shuffle(dead.begin(), dead.end(), rng);
        int deaths = std::min<int>(events, static_cast<int>(mortal.size()));
        int births = std::min<int>(events, static_cast<int>(dead.size()));
        for (int i = 0; i < deaths; ++i) alive[mortal[i]] = 0;
        for (int i = 0; i < births; ++i) alive[dead[i]] = 1;
      }
    }
    for (int i = 0; i < n; ++i) {
      double w = alive[i] ? std::exp(base[i] + dev[i]) * (core[i] ? 1.0 : p.small_scale) : 0.0;
      tree.weights[leaf_ids[i]].push_back(w);
    }
  }
  return tree;
}

// Moves the parameters towards the target class after a miss.
void adjust(Params& p, const DataClass& target, const Features& f, const DataClass& got) {
  if (got.variance != target.variance) {
    if (target.variance == Variance::Low) {
      p.log_sd *= 0.7;
      p.small_scale = std::min(0.5, p.small_scale * 1.5);
    } else {
      p.log_sd += 0.4;
    }
  }
  if (got.change != target.change) {
    switch (target.change) {
      case Change::Low:
        p.noise *= 0.6;
        p.small_scale *= 0.6;
        break;
      case Change::Regular:
        if (f.change.mean >= 0.2) p.noise *= 0.7;
        else p.noise *= 1.4;
        break;
      case Change::Spiky: p.noise *= 1.5; break;
    }
  }
  if (got.insdel != target.insdel) {
    switch (target.insdel) {
      case InsDel::Low: p.churn = 0.0; break;
      case InsDel::Regular:
        if (f.impact.mean >= 0.2) p.churn *= 0.75;
        else p.churn *= 1.25;
        break;
      case InsDel::Spiky: p.churn *= 1.3; break;
    }
  }
}

Params initial_params(const DataClass& target) {
  Params p;
  p.log_sd = target.variance == Variance::Low ? 0.5 : 1.6;
  switch (target.change) {
    case Change::Low: p.noise = 0.02; break;
    case Change::Regular: p.noise = 0.12; break;
    case Change::Spiky: p.noise = 0.45; break;
  }
  switch (target.insdel) {
    case InsDel::Low: p.churn = 0.0; break;
    case InsDel::Regular: p.churn = 0.1; break;
    case InsDel::Spiky: p.churn = 0.3; break;
  }
  return p;
}

}  // namespace

TimeVaryingTree generate_synthetic(const DataClass& target, int leaves, int timesteps, std::uint64_t seed,
                                   const GeneratorOptions& opts) {
  if (leaves < 2) throw DatasetError("generate_synthetic: need at least 2 leaves");
  if (timesteps < 2) throw DatasetError("generate_synthetic: need at least 2 timesteps");
  Params p = initial_params(target);
  std::string last;
  for (int a = 0; a < opts.max_attempts; ++a) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(a)};
    std::mt19937_64 rng(seq);
    auto tree = attempt(target, leaves, timesteps, p, rng);
    auto f = compute_features(tree);
    auto got = classify(f);
    if (got == target) {
      tree.name = "syn-" + label(target) + "-" + std::to_string(seed);
      std::replace(tree.name.begin(), tree.name.end(), '/', '_');
      return tree;
    }
    last = label(got);
    adjust(p, target, f, got);
  }
  throw DatasetError("generate_synthetic: no dataset of class " + label(target) + " after " +
                     std::to_string(opts.max_attempts) + " attempts (last " + last + ")");
}

}  // namespace treemap
