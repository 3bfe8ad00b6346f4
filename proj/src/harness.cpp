#include "treemap/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "treemap/baseline.hpp"
#include "treemap/stateful.hpp"
#include "treemap/stateless.hpp"

#ifndef TREEMAP_VERSION
#define TREEMAP_VERSION "0.0.0"
#endif

namespace treemap {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::uint64_t fnv1a(std::uint64_t h, std::string_view bytes) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

const PairResult* RunResults::find(std::string_view dataset, Algorithm a) const {
  for (const auto& p : pairs)
    if (p.dataset == dataset && p.algorithm == a) return &p;
  return nullptr;
}

std::uint64_t pair_seed(std::uint64_t seed, std::string_view dataset, Algorithm a) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (int i = 0; i < 8; ++i) h = fnv1a(h, std::string(1, static_cast<char>((seed >> (8 * i)) & 0xff)));
  h = fnv1a(h, dataset);
  h = fnv1a(h, "/");
  return fnv1a(h, short_name(a));
}

PairResult run_pair(const TimeVaryingTree& tree, Algorithm a, const RunConfig& config) {
  PairResult r;
  r.dataset = tree.name;
  r.algorithm = a;
  r.seed = pair_seed(config.seed, tree.name, a);
  r.record.dataset = tree.name;
  r.record.algorithm = std::string(short_name(a));
  try {
    const auto& h = tree.hierarchy;
    std::vector<NormalizedStep> steps;
    for (int t = 0; t < tree.num_timesteps; ++t) steps.push_back(normalize_step(tree, t, config.rect.area()));

    LayoutState state;
    Layout prev;
    for (int t = 0; t < tree.num_timesteps; ++t) {
      Layout cur;
      if (is_state_aware(a)) {
        if (t == 0) state = init_state(a, h, steps[0], config.rect, r.seed);
        else advance(state, steps[t], config.realize);
        cur = state.current;
      } else {
        cur = layout_step(h, steps[t], a, config.rect);
      }

      if (config.validate) {
        auto v = validate_layout(cur, steps[t]);
        r.max_area_error = std::max(r.max_area_error, v.max_area_error);
        if (!v.passed) {
          if (r.invalid_steps == 0)
            r.first_invalid = "t=" + std::to_string(t) + ": " + (v.failures.empty() ? "" : v.failures.front());
          ++r.invalid_steps;
        }
      }

      StepMetrics m;
      double rho_sum = 0.0;
      for (const auto& c : cur.cells) {
        double rho = c.rect.w > 0.0 && c.rect.h > 0.0 ? aspect_ratio(c.rect) : 0.0;
        ++r.bounds.rects;
        if (!(rho > 0.0 && rho <= 1.0)) ++r.bounds.rho_out;
        rho_sum += rho;
      }
      m.mean_rho = cur.cells.empty() ? kNaN : rho_sum / static_cast<double>(cur.cells.size());

      int born = 0, gone = 0;
      if (t > 0) {
        for (int leaf : h->leaves()) {
          born += !steps[t - 1].alive(leaf) && steps[t].alive(leaf);
          gone += steps[t - 1].alive(leaf) && !steps[t].alive(leaf);
        }
        auto base = build_baseline(prev, steps[t - 1], steps[t], config.realize);
        if (!base.converged) ++r.baseline_failures;
        auto tm = transition_metrics(prev, cur, base.baseline);
        m.mean_ct = tm.mean_ct;
        m.mean_ct_baseline = tm.mean_ct_baseline;
        m.mean_sigma = tm.mean_sigma;
        m.compared = tm.compared;
        for (const auto& c : prev.cells) {
          const Rect* a_next = cur.find_cell(c.id);
          const Rect* a_base = base.baseline.find_cell(c.id);
          if (!a_next || !a_base) continue;
          double d_next = corner_travel(c.rect, *a_next, prev.bounds);
          double d_base = corner_travel(c.rect, *a_base, prev.bounds);
          ++r.bounds.transitions;
          if (d_next < 0.0 || d_next > 1.0) ++r.bounds.ct_out;
          if (d_base < 0.0 || d_base > 1.0) ++r.bounds.ct_out;
          if (stability(d_next, d_base) < 0.0) ++r.bounds.sigma_out;
          r.bounds.max_ct = std::max({r.bounds.max_ct, d_next, d_base});
        }
      } else {
        m.mean_ct = m.mean_ct_baseline = m.mean_sigma = kNaN;
      }
      m.t = t;
      r.inserted.push_back(born);
      r.deleted.push_back(gone);
      r.record.per_step.push_back(m);
      if (config.keep_layouts) r.layouts.push_back(cur);
      prev = std::move(cur);
    }
  } catch (const std::exception& e) {
    r.ok = false;
    r.error = e.what();
  }
  aggregate(r.record);
  return r;
}

RunResults run_matrix(const std::vector<TimeVaryingTree>& datasets, const RunConfig& config) {
  if (config.algorithms.empty()) throw std::invalid_argument("run_matrix: no algorithms");
  if (!(config.rect.w > 0.0) || !(config.rect.h > 0.0)) throw std::invalid_argument("run_matrix: degenerate rect");
  RunResults results;
  results.config = config;
  for (const auto& d : datasets) results.datasets.push_back(d.name);
  const std::size_t n_alg = config.algorithms.size();
  const std::size_t total = datasets.size() * n_alg;
  results.pairs.resize(total);

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < total; i = next++)
      results.pairs[i] = run_pair(datasets[i / n_alg], config.algorithms[i % n_alg], config);
  };
  const std::size_t threads = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(config.jobs, 1)), 1, std::max<std::size_t>(total, 1));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return results;
}

double median(std::vector<double> values) {
  std::erase_if(values, [](double v) { return !std::isfinite(v); });
  if (values.empty()) return kNaN;
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

std::vector<double> relative_scores(const std::vector<double>& values, Direction direction) {
  double best = kNaN;
  for (double v : values) {
    if (!std::isfinite(v)) continue;
    if (std::isnan(best) || (direction == Direction::HigherBetter ? v > best : v < best)) best = v;
  }
  if (std::isnan(best)) throw std::invalid_argument("relative_scores: no finite values");
  const double med = median(values);
  std::vector<double> out;
  out.reserve(values.size());
  for (double v : values) {
    if (!std::isfinite(v)) out.push_back(kNaN);
    else if (med == best) out.push_back(v == best ? 0.0 : 1.0);
    else out.push_back(std::min(1.0, 0.5 * std::abs(v - best) / std::abs(med - best)));
  }
  return out;
}

double consistency(const std::vector<std::vector<double>>& scores_by_dataset) {
  std::size_t cols = 0;
  for (const auto& row : scores_by_dataset) cols = std::max(cols, row.size());
  double c = 0.0;
  for (std::size_t j = 0; j < cols; ++j) {
    // Shifted by the first value so that a constant column is exactly 0.
    double shift = kNaN, sum = 0.0, sq = 0.0;
    int n = 0;
    for (const auto& row : scores_by_dataset) {
      if (j >= row.size() || !std::isfinite(row[j])) continue;
      if (n == 0) shift = row[j];
      sum += row[j] - shift;
      ++n;
    }
    if (n == 0) continue;
    const double mean = sum / n;
    for (const auto& row : scores_by_dataset)
      if (j < row.size() && std::isfinite(row[j])) sq += (row[j] - shift - mean) * (row[j] - shift - mean);
    c += sq / n;
  }
  return c;
}

double metric_value(const PairResult& pair, Metric metric) {
  if (!pair.ok) return kNaN;
  return metric == Metric::VisualQuality ? pair.record.dataset_mean_rho : pair.record.dataset_mean_sigma;
}

Direction direction_of(Metric metric) {
  return metric == Metric::VisualQuality ? Direction::HigherBetter : Direction::LowerBetter;
}

std::vector<std::vector<double>> score_matrix(const RunResults& results, Metric metric) {
  const std::size_t n_alg = results.config.algorithms.size();
  std::vector<std::vector<double>> out;
  for (std::size_t d = 0; d < results.datasets.size(); ++d) {
    std::vector<double> values;
    for (std::size_t a = 0; a < n_alg; ++a) values.push_back(metric_value(results.pairs[d * n_alg + a], metric));
    bool any = std::any_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); });
    out.push_back(any ? relative_scores(values, direction_of(metric)) : std::vector<double>(n_alg, kNaN));
  }
  return out;
}

std::string csv_number(double v) {
  if (std::isnan(v)) return "";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string results_csv(const RunResults& results) {
  std::string out = "dataset,algorithm,timestep,mean_rho,mean_ct,mean_ct_baseline,mean_sigma\n";
  for (const auto& p : results.pairs) {
    const std::string prefix = csv_field(p.dataset) + "," + std::string(short_name(p.algorithm)) + ",";
    for (const auto& s : p.record.per_step)
      out += prefix + std::to_string(s.t) + "," + csv_number(s.mean_rho) + "," + csv_number(s.mean_ct) + "," +
             csv_number(s.mean_ct_baseline) + "," + csv_number(s.mean_sigma) + "\n";
    const auto& r = p.record;
    out += prefix + "ALL," + csv_number(p.ok ? r.dataset_mean_rho : kNaN) + "," +
           csv_number(p.ok ? r.dataset_mean_ct : kNaN) + "," + csv_number(p.ok ? r.dataset_mean_ct_baseline : kNaN) +
           "," + csv_number(p.ok ? r.dataset_mean_sigma : kNaN) + "\n";
  }
  return out;
}

std::string classification_csv(const std::vector<std::pair<std::string, DataClass>>& classes) {
  std::string out = "dataset,levels,variance,change,insdel,label\n";
  for (const auto& [name, c] : classes) {
    out += csv_field(name) + "," + std::string(to_string(c.levels)) + "," + std::string(to_string(c.variance)) + "," +
           std::string(to_string(c.change)) + "," + std::string(to_string(c.insdel)) + "," + label(c) + "\n";
  }
  return out;
}

std::string manifest_json(const RunResults& results) {
  using ojson = nlohmann::ordered_json;
  const auto& c = results.config;
  ojson m;
  m["tool"] = "treemap-bench";
  m["version"] = TREEMAP_VERSION;
  ojson config;
  config["rect"] = {c.rect.w, c.rect.h};
  ojson algs = ojson::array();
  for (Algorithm a : c.algorithms) algs.push_back(std::string(short_name(a)));
  config["algorithms"] = algs;
  config["seed"] = c.seed;
  config["realize_tolerance"] = c.realize.tolerance;
  config["realize_max_iterations"] = c.realize.max_iterations;
  m["config"] = config;
  m["datasets"] = results.datasets;
  ojson pairs = ojson::array();
  for (const auto& p : results.pairs) {
    ojson e;
    e["dataset"] = p.dataset;
    e["algorithm"] = std::string(short_name(p.algorithm));
    e["seed"] = p.seed;
    e["status"] = p.ok ? (p.invalid_steps ? "invalid" : "ok") : "failed";
    if (!p.ok) e["error"] = p.error;
    if (p.invalid_steps) e["first_invalid"] = p.first_invalid;
    e["invalid_steps"] = p.invalid_steps;
    e["max_area_error"] = p.max_area_error;
    e["baseline_failures"] = p.baseline_failures;
    pairs.push_back(e);
  }
  m["pairs"] = pairs;
  return m.dump(1) + "\n";
}

}  // namespace treemap
