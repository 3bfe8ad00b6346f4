#include "treemap/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>

#include "treemap/io.hpp"

namespace treemap {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<std::vector<std::string>> parse_csv(std::string_view text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false, any = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (quoted) {
      if (c == '"' && i + 1 < text.size() && text[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field += c;
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
      any = true;
    } else if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
      any = true;
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      if (any || !field.empty()) {
        row.push_back(std::move(field));
        rows.push_back(std::move(row));
      }
      row.clear();
      field.clear();
      any = false;
    } else {
      field += c;
      any = true;
    }
  }
  if (any || !field.empty()) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

double parse_number(const std::string& s) { return s.empty() ? kNaN : std::stod(s); }

std::string esc(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string fmt(double v, int digits = 3) {
  if (std::isnan(v)) return "-";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string slug(std::string s) {
  for (char& c : s)
    if (c == '/') c = '_';
  return s;
}

// Light yellow for 0 (best) through orange to dark red for 1.
std::string score_color(double s) {
  if (std::isnan(s)) return "#d9d9d9";
  s = std::clamp(s, 0.0, 1.0);
  const double stops[3][3] = {{255, 255, 204}, {253, 141, 60}, {128, 0, 38}};
  int i = s < 0.5 ? 0 : 1;
  double f = s < 0.5 ? s / 0.5 : (s - 0.5) / 0.5;
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", static_cast<int>(std::lround(stops[i][0] + f * (stops[i + 1][0] - stops[i][0]))),
                static_cast<int>(std::lround(stops[i][1] + f * (stops[i + 1][1] - stops[i][1]))),
                static_cast<int>(std::lround(stops[i][2] + f * (stops[i + 1][2] - stops[i][2]))));
  return buf;
}

const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2",
                          "#7f7f7f", "#bcbd22", "#17becf", "#393b79", "#637939", "#8c6d31", "#843c39"};

std::string svg_open(double w, double h) {
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(w) + "\" height=\"" + num(h) +
         "\" viewBox=\"0 0 " + num(w) + " " + num(h) + "\" font-family=\"sans-serif\" font-size=\"11\">\n"
         "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

std::string text(double x, double y, std::string_view s, std::string_view extra = "") {
  return "<text x=\"" + num(x) + "\" y=\"" + num(y) + "\"" + (extra.empty() ? "" : " " + std::string(extra)) + ">" +
         esc(s) + "</text>\n";
}

double row_mean(const std::vector<double>& v) {
  double sum = 0.0;
  int n = 0;
  for (double x : v)
    if (std::isfinite(x)) {
      sum += x;
      ++n;
    }
  return n ? sum / n : kNaN;
}

// Scores before the cap, to mark the capped entries.
std::vector<bool> capped_flags(const std::vector<double>& values, Direction dir) {
  std::vector<bool> out(values.size(), false);
  double best = kNaN;
  for (double v : values)
    if (std::isfinite(v) && (std::isnan(best) || (dir == Direction::HigherBetter ? v > best : v < best))) best = v;
  if (std::isnan(best)) return out;
  double med = median(values);
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) continue;
    if (med == best) out[i] = values[i] != best;
    else out[i] = 0.5 * std::abs(values[i] - best) / std::abs(med - best) > 1.0;
  }
  return out;
}

std::vector<std::vector<double>> pick_rows(const std::vector<std::vector<double>>& m, const std::vector<std::size_t>& rows) {
  std::vector<std::vector<double>> out;
  for (auto r : rows) out.push_back(m[r]);
  return out;
}

const char* metric_slug(Metric m) { return m == Metric::VisualQuality ? "visual_quality" : "stability"; }

}  // namespace

RunResults parse_results_csv(std::string_view text) {
  auto rows = parse_csv(text);
  if (rows.empty() || rows[0].size() != 7 || rows[0][0] != "dataset")
    throw std::invalid_argument("results CSV: unexpected header");
  RunResults results;
  std::map<std::pair<std::string, std::string>, PairResult> pairs;
  std::vector<std::string> alg_names;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& r = rows[i];
    if (r.size() != 7) throw std::invalid_argument("results CSV: line " + std::to_string(i + 1) + " has " +
                                                   std::to_string(r.size()) + " fields");
    auto alg = parse_algorithm(r[1]);
    if (!alg) throw std::invalid_argument("results CSV: unknown algorithm " + r[1]);
    if (std::find(results.datasets.begin(), results.datasets.end(), r[0]) == results.datasets.end())
      results.datasets.push_back(r[0]);
    if (std::find(alg_names.begin(), alg_names.end(), r[1]) == alg_names.end()) {
      alg_names.push_back(r[1]);
      results.config.algorithms.clear();
    }
    auto& p = pairs[{r[0], std::string(short_name(*alg))}];
    p.dataset = r[0];
    p.algorithm = *alg;
    p.record.dataset = r[0];
    p.record.algorithm = std::string(short_name(*alg));
    if (r[2] == "ALL") {
      p.record.dataset_mean_rho = parse_number(r[3]);
      p.record.dataset_mean_ct = parse_number(r[4]);
      p.record.dataset_mean_ct_baseline = parse_number(r[5]);
      p.record.dataset_mean_sigma = parse_number(r[6]);
      p.ok = std::isfinite(p.record.dataset_mean_rho);
    } else {
      StepMetrics s;
      s.t = std::stoi(r[2]);
      s.mean_rho = parse_number(r[3]);
      s.mean_ct = parse_number(r[4]);
      s.mean_ct_baseline = parse_number(r[5]);
      s.mean_sigma = parse_number(r[6]);
      p.record.per_step.push_back(s);
    }
  }
  for (const auto& name : alg_names) results.config.algorithms.push_back(*parse_algorithm(name));
  for (const auto& d : results.datasets)
    for (Algorithm a : results.config.algorithms) {
      auto it = pairs.find({d, std::string(short_name(a))});
      if (it != pairs.end()) {
        results.pairs.push_back(std::move(it->second));
      } else {
        PairResult missing;
        missing.dataset = d;
        missing.algorithm = a;
        missing.ok = false;
        missing.error = "missing from results";
        results.pairs.push_back(std::move(missing));
      }
    }
  return results;
}

Classification parse_classification_csv(std::string_view text) {
  auto rows = parse_csv(text);
  if (rows.empty() || rows[0].size() != 6 || rows[0][0] != "dataset")
    throw std::invalid_argument("classification CSV: unexpected header");
  Classification out;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].size() != 6) throw std::invalid_argument("classification CSV: bad line " + std::to_string(i + 1));
    auto c = parse_label(rows[i][5]);
    if (!c) throw std::invalid_argument("classification CSV: unknown label " + rows[i][5]);
    out.push_back({rows[i][0], *c});
  }
  return out;
}

std::vector<std::size_t> order_by_mean(const std::vector<std::vector<double>>& m, bool by_columns) {
  std::vector<double> means;
  if (by_columns) {
    std::size_t cols = m.empty() ? 0 : m[0].size();
    for (std::size_t j = 0; j < cols; ++j) {
      std::vector<double> col;
      for (const auto& row : m) col.push_back(row[j]);
      means.push_back(row_mean(col));
    }
  } else {
    for (const auto& row : m) means.push_back(row_mean(row));
  }
  std::vector<std::size_t> idx(means.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    if (std::isnan(means[a]) != std::isnan(means[b])) return std::isnan(means[b]);
    return means[a] < means[b];
  });
  return idx;
}

std::string matrix_plot_svg(const std::string& title, const std::vector<std::string>& rows,
                            const std::vector<std::string>& columns, const std::vector<std::vector<double>>& scores,
                            const std::vector<std::vector<bool>>& capped) {
  const double cell_h = 14.0;
  const double cell_w = columns.empty() ? 14.0 : std::clamp(900.0 / static_cast<double>(columns.size()), 2.0, 14.0);
  const bool column_labels = columns.size() <= 60;
  const double left = 50.0, top = column_labels ? 110.0 : 40.0;
  const double width = left + cell_w * static_cast<double>(columns.size()) + 20.0;
  const double height = top + cell_h * static_cast<double>(rows.size()) + 40.0;
  std::string svg = svg_open(std::max(width, 320.0), height);
  svg += text(left, 20, title, "font-size=\"14\"");
  for (std::size_t i = 0; i < rows.size(); ++i) {
    double y = top + cell_h * static_cast<double>(i);
    svg += text(left - 6, y + cell_h - 3, rows[i], "text-anchor=\"end\"");
    for (std::size_t j = 0; j < columns.size(); ++j) {
      double s = scores[i][j];
      bool cap = !capped.empty() && capped[i][j];
      svg += "<rect x=\"" + num(left + cell_w * static_cast<double>(j)) + "\" y=\"" + num(y) + "\" width=\"" +
             num(cell_w) + "\" height=\"" + num(cell_h) + "\" fill=\"" + (cap ? std::string("#7b3294") : score_color(s)) +
             "\"><title>" + esc(rows[i] + " / " + columns[j] + ": " + fmt(s)) + "</title></rect>\n";
    }
  }
  if (column_labels)
    for (std::size_t j = 0; j < columns.size(); ++j) {
      double x = left + cell_w * (static_cast<double>(j) + 0.75);
      svg += text(x, top - 4, columns[j], "font-size=\"8\" transform=\"rotate(-60 " + num(x) + " " + num(top - 4) + ")\"");
    }
  double ly = top + cell_h * static_cast<double>(rows.size()) + 20.0;
  for (int k = 0; k <= 4; ++k) {
    double s = k / 4.0;
    svg += "<rect x=\"" + num(left + 44.0 * k) + "\" y=\"" + num(ly) + "\" width=\"12\" height=\"10\" fill=\"" +
           score_color(s) + "\"/>\n" + text(left + 44.0 * k + 15, ly + 9, fmt(s, 2));
  }
  svg += "<rect x=\"" + num(left + 220) + "\" y=\"" + num(ly) + "\" width=\"12\" height=\"10\" fill=\"#7b3294\"/>\n" +
         text(left + 235, ly + 9, "capped");
  return svg + "</svg>\n";
}

Ranking rank_algorithms(const RunResults& results, const std::vector<std::size_t>& dataset_rows) {
  const auto& algs = results.config.algorithms;
  const std::size_t n_alg = algs.size();
  auto vq = pick_rows(score_matrix(results, Metric::VisualQuality), dataset_rows);
  auto st = pick_rows(score_matrix(results, Metric::Stability), dataset_rows);
  Ranking r;
  for (std::size_t a = 0; a < n_alg; ++a) {
    std::vector<double> rho, sigma, vq_s, st_s;
    for (std::size_t k = 0; k < dataset_rows.size(); ++k) {
      const auto& p = results.pairs[dataset_rows[k] * n_alg + a];
      rho.push_back(metric_value(p, Metric::VisualQuality));
      sigma.push_back(metric_value(p, Metric::Stability));
      vq_s.push_back(vq[k][a]);
      st_s.push_back(st[k][a]);
    }
    const std::string name(short_name(algs[a]));
    r.visual_quality.push_back({name, row_mean(rho), row_mean(vq_s)});
    r.stability.push_back({name, row_mean(sigma), row_mean(st_s)});
  }
  auto by = [](bool descending) {
    return [descending](const RankingEntry& x, const RankingEntry& y) {
      if (std::isnan(x.mean_value) != std::isnan(y.mean_value)) return std::isnan(y.mean_value);
      return descending ? x.mean_value > y.mean_value : x.mean_value < y.mean_value;
    };
  };
  std::stable_sort(r.visual_quality.begin(), r.visual_quality.end(), by(true));
  std::stable_sort(r.stability.begin(), r.stability.end(), by(false));
  return r;
}

std::string ranking_csv(const Ranking& r) {
  std::string out = "rank,vq_algorithm,mean_rho,vq_score,st_algorithm,mean_sigma,st_score\n";
  for (std::size_t i = 0; i < r.visual_quality.size(); ++i) {
    const auto& v = r.visual_quality[i];
    const auto& s = r.stability[i];
    out += std::to_string(i + 1) + "," + v.algorithm + "," + csv_number(v.mean_value) + "," + csv_number(v.mean_score) +
           "," + s.algorithm + "," + csv_number(s.mean_value) + "," + csv_number(s.mean_score) + "\n";
  }
  return out;
}

std::string ranking_svg(const std::string& title, const Ranking& r) {
  const double row_h = 18.0;
  std::string svg = svg_open(380, 70 + row_h * static_cast<double>(r.visual_quality.size()));
  svg += text(10, 20, title, "font-size=\"14\"");
  svg += text(40, 45, "visual quality (mean rho)", "font-weight=\"bold\"");
  svg += text(210, 45, "stability (mean sigma)", "font-weight=\"bold\"");
  for (std::size_t i = 0; i < r.visual_quality.size(); ++i) {
    double y = 65 + row_h * static_cast<double>(i);
    const auto& v = r.visual_quality[i];
    const auto& s = r.stability[i];
    svg += text(10, y, std::to_string(i + 1) + ".");
    svg += "<rect x=\"38\" y=\"" + num(y - 12) + "\" width=\"150\" height=\"16\" fill=\"" + score_color(v.mean_score) + "\"/>\n";
    svg += text(42, y, v.algorithm + "  " + fmt(v.mean_value));
    svg += "<rect x=\"208\" y=\"" + num(y - 12) + "\" width=\"150\" height=\"16\" fill=\"" + score_color(s.mean_score) + "\"/>\n";
    svg += text(212, y, s.algorithm + "  " + fmt(s.mean_value, 4));
  }
  return svg + "</svg>\n";
}

FeatureProfile feature_profile(const RunResults& results, const Classification& classes, Metric metric) {
  FeatureProfile p;
  p.subclasses = {"1L", "2/3L", "4+L", "LWV", "HWV", "LWC", "RWC", "SWC", "LID", "RID", "SID"};
  const auto& algs = results.config.algorithms;
  const std::size_t n_alg = algs.size();
  for (Algorithm a : algs) p.algorithms.emplace_back(short_name(a));
  auto scores = score_matrix(results, metric);

  std::map<std::string, std::vector<std::size_t>> rows_of_class;
  for (std::size_t d = 0; d < results.datasets.size(); ++d)
    for (const auto& [name, c] : classes)
      if (name == results.datasets[d]) rows_of_class[label(c)].push_back(d);

  p.value.assign(n_alg, std::vector<double>(p.subclasses.size(), kNaN));
  for (std::size_t a = 0; a < n_alg; ++a) {
    for (std::size_t s = 0; s < p.subclasses.size(); ++s) {
      double sum = 0.0;
      int n = 0;
      for (const auto& c : all_classes()) {
        const std::string l = label(c);
        const std::string& sub = p.subclasses[s];
        bool member = sub == to_string(c.levels) || sub == to_string(c.variance) || sub == to_string(c.change) ||
                      sub == to_string(c.insdel);
        auto it = rows_of_class.find(l);
        if (!member || it == rows_of_class.end()) continue;
        std::vector<double> vals;
        for (auto d : it->second) vals.push_back(scores[d][a]);
        double m = row_mean(vals);
        if (std::isnan(m)) continue;
        sum += m;
        ++n;
      }
      if (n) p.value[a][s] = sum / n;
    }
  }
  return p;
}

std::string feature_profile_csv(const FeatureProfile& p) {
  std::string out = "algorithm";
  for (const auto& s : p.subclasses) out += "," + s;
  out += "\n";
  for (std::size_t a = 0; a < p.algorithms.size(); ++a) {
    out += p.algorithms[a];
    for (double v : p.value[a]) out += "," + csv_number(v);
    out += "\n";
  }
  return out;
}

std::string feature_profile_svg(const std::string& title, const FeatureProfile& p) {
  const double left = 50, top = 40, plot_w = 560, plot_h = 260;
  std::string svg = svg_open(left + plot_w + 120, top + plot_h + 60);
  svg += text(left, 22, title, "font-size=\"14\"");
  // Points grouped by feature, with a gap between features.
  const int group_of[] = {0, 0, 0, 1, 1, 2, 2, 2, 3, 3, 3};
  std::vector<double> xs;
  for (std::size_t s = 0; s < p.subclasses.size(); ++s)
    xs.push_back(left + 20 + (static_cast<double>(s) + group_of[s]) * (plot_w - 40) / (p.subclasses.size() + 2));
  auto y_of = [&](double v) { return top + plot_h - v * plot_h; };
  for (int k = 0; k <= 4; ++k) {
    double v = k / 4.0;
    svg += "<line x1=\"" + num(left) + "\" x2=\"" + num(left + plot_w) + "\" y1=\"" + num(y_of(v)) + "\" y2=\"" +
           num(y_of(v)) + "\" stroke=\"#e0e0e0\"/>\n" + text(left - 30, y_of(v) + 4, fmt(v, 2));
  }
  for (std::size_t s = 0; s < xs.size(); ++s) svg += text(xs[s], top + plot_h + 18, p.subclasses[s], "text-anchor=\"middle\"");
  for (std::size_t a = 0; a < p.algorithms.size(); ++a) {
    const char* color = kPalette[a % std::size(kPalette)];
    std::string pts;
    for (std::size_t s = 0; s < xs.size(); ++s) {
      double v = p.value[a][s];
      if (std::isnan(v)) continue;
      pts += num(xs[s]) + "," + num(y_of(v)) + " ";
      svg += "<circle cx=\"" + num(xs[s]) + "\" cy=\"" + num(y_of(v)) + "\" r=\"2.5\" fill=\"" + color + "\"/>\n";
    }
    if (!pts.empty())
      svg += "<polyline points=\"" + pts + "\" fill=\"none\" stroke=\"" + color + "\" stroke-width=\"1.5\"/>\n";
    double ly = top + 14.0 * static_cast<double>(a);
    svg += "<rect x=\"" + num(left + plot_w + 20) + "\" y=\"" + num(ly) + "\" width=\"10\" height=\"10\" fill=\"" + color +
           "\"/>\n" + text(left + plot_w + 35, ly + 9, p.algorithms[a]);
  }
  return svg + "</svg>\n";
}

std::string layout_svg(const Layout& layout, const std::vector<Rect>& walls) {
  const Rect& b = layout.bounds;
  const double scale = 800.0 / std::max(b.w, b.h);
  auto rect = [&](const Rect& r, const std::string& style, const std::string& tip) {
    return "<rect x=\"" + num((r.x - b.x) * scale) + "\" y=\"" + num((r.y - b.y) * scale) + "\" width=\"" +
           num(r.w * scale) + "\" height=\"" + num(r.h * scale) + "\" " + style + ">" +
           (tip.empty() ? "" : "<title>" + esc(tip) + "</title>") + "</rect>\n";
  };
  std::string svg = svg_open(b.w * scale, b.h * scale);
  for (const auto& w : walls) svg += rect(w, "fill=\"#bdbdbd\"", "");
  for (const auto& c : layout.cells)
    svg += rect(c.rect, "fill=\"#deebf7\" stroke=\"#3182bd\" stroke-width=\"0.5\"", layout.name_of(c.id));
  for (const auto& g : layout.groups)
    svg += rect(g.rect, "fill=\"none\" stroke=\"#08306b\" stroke-width=\"1.5\"", layout.name_of(g.id));
  return svg + "</svg>\n";
}

ReportSummary render_reports(const RunResults& results, const Classification& classes, const std::string& out_dir,
                             const ReportOptions& opts) {
  namespace fs = std::filesystem;
  ReportSummary summary;
  fs::create_directories(out_dir);
  auto emit = [&](const std::string& name, const std::string& content) {
    write_text_file((fs::path(out_dir) / name).string(), content);
    summary.files.push_back(name);
  };

  const std::size_t n_alg = results.config.algorithms.size();
  std::vector<std::string> alg_names;
  for (Algorithm a : results.config.algorithms) alg_names.emplace_back(short_name(a));

  std::map<std::string, DataClass> class_of;
  for (const auto& [name, c] : classes) class_of[name] = c;
  for (const auto& [name, c] : classes)
    if (std::find(results.datasets.begin(), results.datasets.end(), name) == results.datasets.end())
      summary.warnings.push_back("class " + label(c) + ": dataset " + name + " has no results");

  // Dataset groups: the whole suite, then every class with results.
  std::vector<std::pair<std::string, std::vector<std::size_t>>> groups;
  std::vector<std::size_t> all(results.datasets.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  groups.push_back({"ALL", all});
  for (const auto& c : all_classes()) {
    std::vector<std::size_t> rows;
    for (std::size_t d = 0; d < results.datasets.size(); ++d) {
      auto it = class_of.find(results.datasets[d]);
      if (it != class_of.end() && it->second == c) rows.push_back(d);
    }
    if (!rows.empty()) groups.push_back({label(c), rows});
  }
  for (const auto& d : results.datasets)
    if (!class_of.count(d)) summary.warnings.push_back("dataset " + d + " is not classified; it appears only in ALL");

  for (Metric metric : {Metric::VisualQuality, Metric::Stability}) {
    auto scores = score_matrix(results, metric);
    std::vector<std::vector<bool>> capped;
    for (std::size_t d = 0; d < results.datasets.size(); ++d) {
      std::vector<double> values;
      for (std::size_t a = 0; a < n_alg; ++a) values.push_back(metric_value(results.pairs[d * n_alg + a], metric));
      capped.push_back(capped_flags(values, direction_of(metric)));
    }
    for (const auto& [name, rows] : groups) {
      // Transpose to algorithms x datasets, then seriate both axes.
      std::vector<std::vector<double>> m(n_alg, std::vector<double>(rows.size()));
      std::vector<std::vector<bool>> cap(n_alg, std::vector<bool>(rows.size()));
      for (std::size_t a = 0; a < n_alg; ++a)
        for (std::size_t k = 0; k < rows.size(); ++k) {
          m[a][k] = scores[rows[k]][a];
          cap[a][k] = capped[rows[k]][a];
        }
      auto row_order = order_by_mean(m, false);
      auto col_order = order_by_mean(m, true);
      std::vector<std::string> rlabels, clabels;
      std::vector<std::vector<double>> ms;
      std::vector<std::vector<bool>> cs;
      for (auto r : row_order) {
        rlabels.push_back(alg_names[r]);
        std::vector<double> mr;
        std::vector<bool> cr;
        for (auto c : col_order) {
          mr.push_back(m[r][c]);
          cr.push_back(cap[r][c]);
        }
        ms.push_back(std::move(mr));
        cs.push_back(std::move(cr));
      }
      for (auto c : col_order) clabels.push_back(results.datasets[rows[c]]);
      emit(std::string("matrix_") + metric_slug(metric) + "_" + slug(name) + ".svg",
           matrix_plot_svg(std::string(metric_slug(metric)) + " scores, " + name + " (" + std::to_string(rows.size()) +
                               " datasets)",
                           rlabels, clabels, ms, cs));
    }
  }

  for (const auto& [name, rows] : groups) {
    auto r = rank_algorithms(results, rows);
    emit("ranking_" + slug(name) + ".csv", ranking_csv(r));
    emit("ranking_" + slug(name) + ".svg", ranking_svg("Ranking, " + name, r));
  }

  for (Metric metric : {Metric::VisualQuality, Metric::Stability}) {
    auto p = feature_profile(results, classes, metric);
    emit(std::string("features_") + metric_slug(metric) + ".csv", feature_profile_csv(p));
    emit(std::string("features_") + metric_slug(metric) + ".svg",
         feature_profile_svg(std::string("Mean ") + metric_slug(metric) + " score per subclass", p));
  }

  // Consistency of each large enough class against a random collection of
  // the same size.
  std::string cons = "class,datasets,metric,consistency,random_consistency,consistent\n";
  std::mt19937_64 rng(opts.seed);
  for (std::size_t g = 1; g < groups.size(); ++g) {
    const auto& [name, rows] = groups[g];
    if (rows.size() < opts.min_class_size) {
      summary.warnings.push_back("class " + name + " has " + std::to_string(rows.size()) + " datasets; consistency needs " +
                                 std::to_string(opts.min_class_size));
      continue;
    }
    const std::size_t k = std::min(opts.collection_size, rows.size());
    if (all.size() < k) continue;
    auto sample = rows;
    std::shuffle(sample.begin(), sample.end(), rng);
    sample.resize(k);
    auto random = all;
    std::shuffle(random.begin(), random.end(), rng);
    random.resize(k);
    for (Metric metric : {Metric::VisualQuality, Metric::Stability}) {
      auto scores = score_matrix(results, metric);
      double c = consistency(pick_rows(scores, sample));
      double c_star = consistency(pick_rows(scores, random));
      cons += name + "," + std::to_string(rows.size()) + "," + metric_slug(metric) + "," + csv_number(c) + "," +
              csv_number(c_star) + "," + (c < c_star ? "true" : "false") + "\n";
    }
  }
  emit("consistency.csv", cons);
  return summary;
}

}  // namespace treemap
