#include "treemap/classify.hpp"

#include <cmath>

namespace treemap {

std::string_view to_string(Levels v) {
  switch (v) {
    case Levels::One: return "1L";
    case Levels::TwoThree: return "2/3L";
    case Levels::FourPlus: return "4+L";
  }
  return "?";
}

std::string_view to_string(Variance v) { return v == Variance::Low ? "LWV" : "HWV"; }

std::string_view to_string(Change v) {
  switch (v) {
    case Change::Low: return "LWC";
    case Change::Regular: return "RWC";
    case Change::Spiky: return "SWC";
  }
  return "?";
}

std::string_view to_string(InsDel v) {
  switch (v) {
    case InsDel::Low: return "LID";
    case InsDel::Regular: return "RID";
    case InsDel::Spiky: return "SID";
  }
  return "?";
}

std::string label(const DataClass& c) {
  std::string out;
  out += to_string(c.levels);
  out += '-';
  out += to_string(c.variance);
  out += '-';
  out += to_string(c.change);
  out += '-';
  out += to_string(c.insdel);
  return out;
}

std::vector<DataClass> all_classes() {
  std::vector<DataClass> out;
  for (Levels l : {Levels::One, Levels::TwoThree, Levels::FourPlus})
    for (Variance v : {Variance::Low, Variance::High})
      for (Change c : {Change::Low, Change::Regular, Change::Spiky})
        for (InsDel i : {InsDel::Low, InsDel::Regular, InsDel::Spiky}) out.push_back({l, v, c, i});
  return out;
}

std::optional<DataClass> parse_label(std::string_view text) {
  for (const auto& c : all_classes())
    if (label(c) == text) return c;
  return std::nullopt;
}

MeanStd mean_std(const std::vector<double>& values) {
  MeanStd s;
  if (values.empty()) return s;
  // Extended accumulation so that a run of equal values has exactly that
  // mean; the subclass thresholds compare against it directly.
  long double sum = 0.0L;
  for (double v : values) sum += v;
  const long double mean = sum / static_cast<long double>(values.size());
  long double acc = 0.0L;
  for (double v : values) acc += (v - mean) * (v - mean);
  s.mean = static_cast<double>(mean);
  s.stddev = static_cast<double>(std::sqrt(acc / static_cast<long double>(values.size())));
  return s;
}

Levels levels_from_depth(int depth) {
  if (depth <= 1) return Levels::One;
  if (depth <= 3) return Levels::TwoThree;
  return Levels::FourPlus;
}

Variance variance_from_cv(double cv) { return cv <= 1.0 ? Variance::Low : Variance::High; }

Change change_from_stats(MeanStd s) {
  if (s.mean < 0.05 && s.stddev < 0.05) return Change::Low;
  if (s.mean >= 0.05 && s.mean < 0.20 && s.stddev / s.mean <= 1.0) return Change::Regular;
  return Change::Spiky;
}

InsDel insdel_from_stats(MeanStd s) {
  if (s.mean < 0.05 && s.stddev < 0.05) return InsDel::Low;
  if (s.mean < 0.20 && s.mean > 0.0 && s.stddev / s.mean <= 1.0) return InsDel::Regular;
  return InsDel::Spiky;
}

int max_leaf_depth(const TimeVaryingTree& tree) {
  const auto& h = *tree.hierarchy;
  int depth = 0;
  for (int leaf : h.leaves()) depth = std::max(depth, h.depth[leaf]);
  return depth;
}

double weight_cv(const TimeVaryingTree& tree) {
  std::vector<double> values;
  for (int leaf : tree.hierarchy->leaves())
    for (double w : tree.weights[leaf])
      if (w > 0.0) values.push_back(w);
  auto s = mean_std(values);
  return s.mean > 0.0 ? s.stddev / s.mean : 0.0;
}

std::vector<double> weight_changes(const TimeVaryingTree& tree) {
  const auto leaves = tree.hierarchy->leaves();
  std::vector<double> out;
  for (int t = 0; t + 1 < tree.num_timesteps; ++t) {
    double total0 = tree.total_weight(t), total1 = tree.total_weight(t + 1);
    double change = 0.0;
    for (int leaf : leaves)
      change += std::abs(tree.weights[leaf][t + 1] / total1 - tree.weights[leaf][t] / total0);
    out.push_back(change);
  }
  return out;
}

std::vector<double> insdel_impacts(const TimeVaryingTree& tree) {
  const auto leaves = tree.hierarchy->leaves();
  std::vector<double> out;
  for (int t = 0; t + 1 < tree.num_timesteps; ++t) {
    int alive = 0, changed = 0;
    for (int leaf : leaves) {
      bool a = tree.weights[leaf][t] > 0.0, b = tree.weights[leaf][t + 1] > 0.0;
      alive += a;
      changed += a != b;
    }
    out.push_back(static_cast<double>(changed) / alive);
  }
  return out;
}

Features compute_features(const TimeVaryingTree& tree) {
  Features f;
  f.depth = max_leaf_depth(tree);
  f.cv = weight_cv(tree);
  f.change = mean_std(weight_changes(tree));
  f.impact = mean_std(insdel_impacts(tree));
  return f;
}

DataClass classify(const Features& f) {
  return {levels_from_depth(f.depth), variance_from_cv(f.cv), change_from_stats(f.change),
          insdel_from_stats(f.impact)};
}

DataClass classify(const TimeVaryingTree& tree) { return classify(compute_features(tree)); }

}  // namespace treemap
