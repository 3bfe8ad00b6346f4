#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "treemap/model.hpp"

namespace treemap {

enum class Levels { One, TwoThree, FourPlus };
enum class Variance { Low, High };
enum class Change { Low, Regular, Spiky };
enum class InsDel { Low, Regular, Spiky };

struct DataClass {
  Levels levels = Levels::One;
  Variance variance = Variance::Low;
  Change change = Change::Low;
  InsDel insdel = InsDel::Low;

  friend bool operator==(const DataClass&, const DataClass&) = default;
};

std::string_view to_string(Levels v);
std::string_view to_string(Variance v);
std::string_view to_string(Change v);
std::string_view to_string(InsDel v);

/// Canonical label such as "2/3L-HWV-SWC-RID".
std::string label(const DataClass& c);
std::optional<DataClass> parse_label(std::string_view text);

/// All 54 classes in label order: levels, variance, change, insdel.
std::vector<DataClass> all_classes();

struct MeanStd {
  double mean = 0.0;
  double stddev = 0.0;  // population
};

MeanStd mean_std(const std::vector<double>& values);

// Subclass predicates on precomputed features; comparisons exactly as
// defined ("<=" for the variation coefficient, "<" for the 5% and 20% marks).
Levels levels_from_depth(int max_leaf_depth);
Variance variance_from_cv(double cv);
Change change_from_stats(MeanStd s);
InsDel insdel_from_stats(MeanStd s);

/// Maximum leaf depth, with the root's children at level 1.
int max_leaf_depth(const TimeVaryingTree& tree);

/// sigma/mu over all positive leaf weights at all time steps.
double weight_cv(const TimeVaryingTree& tree);

/// Per transition: sum over leaves of |relative area change|.
std::vector<double> weight_changes(const TimeVaryingTree& tree);

/// Per transition: |alive(t) symmetric-difference alive(t+1)| / |alive(t)|.
std::vector<double> insdel_impacts(const TimeVaryingTree& tree);

struct Features {
  int depth = 0;
  double cv = 0.0;
  MeanStd change;
  MeanStd impact;
};

Features compute_features(const TimeVaryingTree& tree);
DataClass classify(const Features& f);
DataClass classify(const TimeVaryingTree& tree);

}  // namespace treemap
