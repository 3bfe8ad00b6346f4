#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "treemap/classify.hpp"
#include "treemap/harness.hpp"

namespace treemap {

using Classification = std::vector<std::pair<std::string, DataClass>>;

/// Reads back results.csv; per-pair dataset means come from the ALL rows.
RunResults parse_results_csv(std::string_view text);
Classification parse_classification_csv(std::string_view text);

struct ReportOptions {
  std::size_t min_class_size = 50;   // classes below this get no consistency entry
  std::size_t collection_size = 50;  // datasets sampled per consistency estimate
  std::uint64_t seed = 0;
};

struct ReportSummary {
  std::vector<std::string> files;  // relative to the output directory
  std::vector<std::string> warnings;
};

/// Score matrix plot: rows are algorithms, columns datasets. `capped` marks
/// entries whose score hit the cap. Rows and columns are drawn in the given
/// order.
std::string matrix_plot_svg(const std::string& title, const std::vector<std::string>& rows,
                            const std::vector<std::string>& columns, const std::vector<std::vector<double>>& scores,
                            const std::vector<std::vector<bool>>& capped);

/// Indices sorted by the mean of the finite entries of each row (or
/// column), ascending; rows without finite entries go last. Stable.
std::vector<std::size_t> order_by_mean(const std::vector<std::vector<double>>& m, bool by_columns);

struct RankingEntry {
  std::string algorithm;
  double mean_value = 0.0;  // raw metric mean over the datasets
  double mean_score = 0.0;  // relative score mean
};

/// Two independently sorted columns: visual quality by decreasing mean rho
/// and stability by increasing mean sigma.
struct Ranking {
  std::vector<RankingEntry> visual_quality;
  std::vector<RankingEntry> stability;
};

Ranking rank_algorithms(const RunResults& results, const std::vector<std::size_t>& dataset_rows);
std::string ranking_csv(const Ranking& r);
std::string ranking_svg(const std::string& title, const Ranking& r);

/// One point per subclass and algorithm: the mean over classes containing
/// the subclass of the per-class mean score, so that classes weigh equally.
struct FeatureProfile {
  std::vector<std::string> subclasses;  // 11 labels, grouped by feature
  std::vector<std::string> algorithms;
  std::vector<std::vector<double>> value;  // [algorithm][subclass], NaN if no data
};

FeatureProfile feature_profile(const RunResults& results, const Classification& classes, Metric metric);
std::string feature_profile_csv(const FeatureProfile& p);
std::string feature_profile_svg(const std::string& title, const FeatureProfile& p);

/// Drawing of one layout: cells outlined, groups drawn thicker. Walls, if
/// any, are shaded.
std::string layout_svg(const Layout& layout, const std::vector<Rect>& walls = {});

/// Writes every report below `out_dir`.
ReportSummary render_reports(const RunResults& results, const Classification& classes, const std::string& out_dir,
                             const ReportOptions& opts = {});

}  // namespace treemap
