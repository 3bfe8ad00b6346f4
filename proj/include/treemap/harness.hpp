#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "treemap/algorithm.hpp"
#include "treemap/classify.hpp"
#include "treemap/geometry.hpp"
#include "treemap/metrics.hpp"
#include "treemap/model.hpp"
#include "treemap/realizer.hpp"

namespace treemap {

struct RunConfig {
  Rect rect{0, 0, 1000, 1000};
  std::vector<Algorithm> algorithms{kAllAlgorithms.begin(), kAllAlgorithms.end()};
  std::uint64_t seed = 0;
  int jobs = 1;
  RealizeOptions realize;
  bool keep_layouts = false;  // retain every step's layout in the results
  bool validate = true;       // run validate_layout on every step
};

/// Per-rectangle bound checks over one pair.
struct BoundCounts {
  long rects = 0;        // rectangles measured for rho
  long transitions = 0;  // rectangles measured for travel and stability
  long rho_out = 0;      // rho outside [0, 1]
  long ct_out = 0;       // corner travel outside [0, 1]
  long sigma_out = 0;    // negative stability
  double max_ct = 0.0;
};

struct PairResult {
  std::string dataset;
  Algorithm algorithm = Algorithm::SliceAndDice;
  std::uint64_t seed = 0;
  bool ok = true;
  std::string error;
  MetricRecord record;
  std::vector<int> inserted;  // per step, leaves born since the previous step
  std::vector<int> deleted;   // per step, leaves gone since the previous step
  int invalid_steps = 0;
  std::string first_invalid;  // first validation failure, if any
  double max_area_error = 0.0;
  int baseline_failures = 0;  // baselines that did not converge
  BoundCounts bounds;
  std::vector<Layout> layouts;  // filled when keep_layouts is set
};

struct RunResults {
  RunConfig config;
  std::vector<std::string> datasets;
  std::vector<PairResult> pairs;  // dataset-major, algorithms in config order

  const PairResult* find(std::string_view dataset, Algorithm a) const;
};

/// Seed of one (dataset, algorithm) pair, independent of scheduling.
std::uint64_t pair_seed(std::uint64_t seed, std::string_view dataset, Algorithm a);

/// Layouts of every step, baselines of every transition, and their metrics.
/// Errors are captured in the result rather than thrown.
PairResult run_pair(const TimeVaryingTree& tree, Algorithm a, const RunConfig& config);

/// Runs every pair, `config.jobs` at a time. Throws std::invalid_argument
/// before any work for an empty algorithm list or a degenerate rectangle.
RunResults run_matrix(const std::vector<TimeVaryingTree>& datasets, const RunConfig& config);

enum class Direction { HigherBetter, LowerBetter };

/// Linear scores with the best value at 0 and the median at 0.5, capped at
/// 1. Non-finite values are ignored and score NaN. Throws
/// std::invalid_argument when no value is finite.
std::vector<double> relative_scores(const std::vector<double>& values, Direction direction);

/// Median of finite values; the mean of the middle two for even counts.
double median(std::vector<double> values);

/// Sum over columns (algorithms) of the population variance over rows
/// (datasets). NaN entries are skipped.
double consistency(const std::vector<std::vector<double>>& scores_by_dataset);

enum class Metric { VisualQuality, Stability };

/// Dataset mean of the metric: rho for visual quality, sigma for stability.
double metric_value(const PairResult& pair, Metric metric);
Direction direction_of(Metric metric);

/// Relative scores per dataset, rows in dataset order and columns in
/// algorithm order. Rows without any finite value are all NaN.
std::vector<std::vector<double>> score_matrix(const RunResults& results, Metric metric);

std::string results_csv(const RunResults& results);
std::string classification_csv(const std::vector<std::pair<std::string, DataClass>>& classes);
std::string manifest_json(const RunResults& results);

/// Formats like printf("%.10g"); NaN becomes the empty string.
std::string csv_number(double v);

}  // namespace treemap
