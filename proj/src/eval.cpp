#include "eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <numeric>
#include <sstream>

#include <boost/math/distributions/students_t.hpp>
#include <json.hpp>

#include "dataset.hpp"
#include "error.hpp"
#include "serialize.hpp"

namespace rirlab {

namespace {

void check_lengths(std::size_t a, std::size_t b) {
  if (a != b) fail(ErrorCode::kLengthMismatch, "input lengths differ");
  if (a == 0) fail(ErrorCode::kLengthMismatch, "inputs are empty");
}

std::vector<double> ranks(std::span<const double> x) {
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> r(x.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && x[order[j + 1]] == x[order[i]]) ++j;
    const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) r[order[k]] = avg;
    i = j + 1;
  }
  return r;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::string fmt(const std::optional<double>& v) { return v ? fmt(*v) : ""; }

nlohmann::json opt_json(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  return out;
}

std::optional<double> fold_t_interval(const std::vector<double>& fold_mae,
                                      std::optional<double>& lo, std::optional<double>& hi) {
  if (fold_mae.empty()) return std::nullopt;
  const double k = static_cast<double>(fold_mae.size());
  const double mean = std::accumulate(fold_mae.begin(), fold_mae.end(), 0.0) / k;
  if (fold_mae.size() >= 2) {
    double ss = 0.0;
    for (double v : fold_mae) ss += (v - mean) * (v - mean);
    const double se = std::sqrt(ss / (k - 1.0)) / std::sqrt(k);
    const boost::math::students_t dist(k - 1.0);
    const double t = boost::math::quantile(boost::math::complement(dist, 0.025));
    lo = mean - t * se;
    hi = mean + t * se;
  }
  return mean;
}

}  // namespace

double mae(std::span<const double> y_true, std::span<const double> y_pred) {
  check_lengths(y_true.size(), y_pred.size());
  double s = 0.0;
  for (std::size_t i = 0; i < y_true.size(); ++i) s += std::abs(y_true[i] - y_pred[i]);
  return s / static_cast<double>(y_true.size());
}

double relative_mae(std::span<const double> y_true, std::span<const double> y_pred) {
  check_lengths(y_true.size(), y_pred.size());
  double s = 0.0;
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    if (!(y_true[i] > 0.0)) fail(ErrorCode::kNonPositiveTruth, "true distance must be > 0");
    s += std::abs(y_true[i] - y_pred[i]) / y_true[i];
  }
  return s / static_cast<double>(y_true.size());
}

ConfidenceInterval bootstrap_ci(std::span<const double> values, Rng& rng, double level,
                                int rounds) {
  if (values.size() < 2) fail(ErrorCode::kTooFewSamples, "bootstrap needs at least 2 values");
  if (!(level > 0.0 && level < 1.0) || rounds < 1) {
    fail(ErrorCode::kInvalidArgument, "bootstrap level must be in (0, 1) with rounds >= 1");
  }
  const std::size_t n = values.size();
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  std::vector<double> means(static_cast<std::size_t>(rounds));
  for (auto& m : means) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += values[pick(rng)];
    m = s / static_cast<double>(n);
  }
  std::sort(means.begin(), means.end());
  const double tail = 0.5 * (1.0 - level);
  return {quantile_sorted(means, tail), quantile_sorted(means, 1.0 - tail)};
}

double pearson_r(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) fail(ErrorCode::kLengthMismatch, "input lengths differ");
  if (x.size() < 2) fail(ErrorCode::kTooFewSamples, "correlation needs at least 2 points");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (!(sxx > 0.0) || !(syy > 0.0)) fail(ErrorCode::kZeroVariance, "zero variance input");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double spearman_rho(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) fail(ErrorCode::kLengthMismatch, "input lengths differ");
  const auto rx = ranks(x);
  const auto ry = ranks(y);
  return pearson_r(rx, ry);
}

double quantile_sorted(std::span<const double> sorted, double q) {
  if (sorted.empty()) fail(ErrorCode::kTooFewSamples, "quantile of empty data");
  const double pos = std::clamp(q, 0.0, 1.0) * static_cast<double>(sorted.size() - 1);
  const auto i = static_cast<std::size_t>(std::floor(pos));
  if (i + 1 >= sorted.size()) return sorted.back();
  const double frac = pos - static_cast<double>(i);
  return sorted[i] + frac * (sorted[i + 1] - sorted[i]);
}

std::vector<RibbonBin> ribbon(std::span<const double> covariate,
                              std::span<const double> abs_errors, int n_bins) {
  if (covariate.size() != abs_errors.size()) {
    fail(ErrorCode::kLengthMismatch, "covariate and error lengths differ");
  }
  if (n_bins < 2) fail(ErrorCode::kInvalidArgument, "ribbon needs at least 2 bins");
  std::vector<RibbonBin> bins(static_cast<std::size_t>(n_bins));
  if (covariate.empty()) return bins;
  const auto [mn, mx] = std::minmax_element(covariate.begin(), covariate.end());
  const double lo = *mn;
  const double width = (*mx - lo) / n_bins;
  std::vector<std::vector<double>> members(bins.size());
  for (std::size_t i = 0; i < covariate.size(); ++i) {
    std::size_t b = 0;
    if (width > 0.0) {
      b = static_cast<std::size_t>(
          std::clamp(std::floor((covariate[i] - lo) / width), 0.0, n_bins - 1.0));
    }
    members[b].push_back(abs_errors[i]);
  }
  for (std::size_t b = 0; b < bins.size(); ++b) {
    bins[b].lo = lo + width * static_cast<double>(b);
    bins[b].hi = b + 1 == bins.size() ? *mx : lo + width * static_cast<double>(b + 1);
    auto& m = members[b];
    bins[b].count = m.size();
    if (m.empty()) continue;
    std::sort(m.begin(), m.end());
    bins[b].median = quantile_sorted(m, 0.5);
    bins[b].q1 = quantile_sorted(m, 0.25);
    bins[b].q3 = quantile_sorted(m, 0.75);
  }
  return bins;
}

std::vector<PredictionRow> parse_predictions_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) fail(ErrorCode::kFormat, "predictions CSV is empty");
  const auto header = split_csv_line(line);
  std::map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < header.size(); ++i) col[header[i]] = i;
  for (const char* req : {"sample_id", "scenario", "variant", "method", "r_hat"}) {
    if (!col.count(req)) {
      fail(ErrorCode::kFormat, std::string("predictions CSV lacks column '") + req + "'");
    }
  }
  const bool has_truth = col.count("r_true") > 0;
  std::vector<PredictionRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto f = split_csv_line(line);
    if (f.size() != header.size()) {
      fail(ErrorCode::kFormat, "predictions CSV line " + std::to_string(line_no) +
                                   " has the wrong number of fields");
    }
    PredictionRow r;
    r.sample_id = f[col["sample_id"]];
    r.scenario = f[col["scenario"]];
    r.variant = f[col["variant"]];
    r.method = f[col["method"]];
    try {
      r.r_hat = std::stod(f[col["r_hat"]]);
      r.r_true = has_truth && !f[col["r_true"]].empty() ? std::stod(f[col["r_true"]])
                                                         : std::nan("");
    } catch (const std::exception&) {
      fail(ErrorCode::kFormat, "bad number on predictions CSV line " + std::to_string(line_no));
    }
    scenario_from_name(r.scenario);
    variant_from_name(r.variant);
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<PredictionRow> read_predictions_csv(const std::string& path) {
  return parse_predictions_csv(read_text_file(path));
}

std::string predictions_to_csv(const std::vector<PredictionRow>& rows) {
  std::ostringstream os;
  os << "sample_id,scenario,variant,method,r_true,r_hat\n";
  for (const auto& r : rows) {
    os << r.sample_id << ',' << r.scenario << ',' << r.variant << ',' << r.method << ','
       << fmt(r.r_true) << ',' << fmt(r.r_hat) << '\n';
  }
  return os.str();
}

EvalReport build_matrix(const std::vector<PredictionRow>& predictions, const Manifest& manifest,
                        const EvalOptions& options) {
  struct Point {
    const SampleRecord* rec;
    double r_true;
    double r_hat;
  };
  std::vector<std::string> methods;
  std::map<std::string, std::vector<Point>> groups;
  for (const auto& p : predictions) {
    const SampleRecord* rec = manifest.find(p.sample_id);
    if (!rec) fail(ErrorCode::kUnknownSampleId, "unknown sample id '" + p.sample_id + "'");
    if (std::find(methods.begin(), methods.end(), p.method) == methods.end()) {
      methods.push_back(p.method);
    }
    const double truth = std::isnan(p.r_true) ? rec->r : p.r_true;
    groups[p.scenario + "/" + p.variant + "/" + p.method].push_back({rec, truth, p.r_hat});
  }

  static const char* kCovariates[] = {"distance", "drr", "c50", "t60"};
  EvalReport report;
  for (const char* c : kCovariates) report.ribbons.push_back({c, {}});

  for (const auto& method : methods) {
    for (const auto& spec : kAllScenarios) {
      for (Variant v : kAllVariants) {
        EvalCell cell;
        cell.scenario = std::string(scenario_name(spec));
        cell.variant = std::string(variant_name(v));
        cell.method = method;
        const std::string key = cell.scenario + "/" + cell.variant + "/" + method;
        const auto it = groups.find(key);
        if (it == groups.end()) {
          report.cells.push_back(cell);
          continue;
        }
        const auto& pts = it->second;
        std::vector<double> y, yh, err;
        for (const auto& p : pts) {
          y.push_back(p.r_true);
          yh.push_back(p.r_hat);
          err.push_back(std::abs(p.r_true - p.r_hat));
        }
        cell.n = pts.size();
        cell.mae = mae(y, yh);
        cell.rel_mae_pct = 100.0 * relative_mae(y, yh);
        if (pts.size() >= 2) {
          Rng rng(substream_seed(options.seed, 0, "ci/" + key));
          const auto ci = bootstrap_ci(err, rng, 0.95, options.bootstrap_rounds);
          cell.ci_lo = std::min(ci.lo, *cell.mae);
          cell.ci_hi = std::max(ci.hi, *cell.mae);
          try {
            cell.pearson = pearson_r(y, yh);
          } catch (const Error&) {
          }
        } else {
          cell.ci_lo = cell.mae;
          cell.ci_hi = cell.mae;
        }
        std::map<int, std::pair<double, int>> per_fold;
        for (std::size_t i = 0; i < pts.size(); ++i) {
          auto& f = per_fold[pts[i].rec->fold];
          f.first += err[i];
          f.second += 1;
        }
        std::vector<double> fold_mae;
        for (const auto& [_, f] : per_fold) fold_mae.push_back(f.first / f.second);
        cell.fold_mae_mean = fold_t_interval(fold_mae, cell.fold_ci_lo, cell.fold_ci_hi);
        report.cells.push_back(cell);

        for (auto& table : report.ribbons) {
          std::vector<double> cov, e;
          std::size_t excluded = 0;
          for (std::size_t i = 0; i < pts.size(); ++i) {
            const SampleRecord& rec = *pts[i].rec;
            double x = 0.0;
            if (table.covariate == "distance") {
              x = pts[i].r_true;
            } else if (table.covariate == "drr" || table.covariate == "c50") {
              const Decibels& d = table.covariate == "drr" ? rec.drr : rec.c50;
              if (d.unbounded) {
                ++excluded;
                continue;
              }
              x = d.db;
            } else {
              x = rec.t60_sabine;
            }
            cov.push_back(x);
            e.push_back(err[i]);
          }
          table.rows.push_back({cell.scenario, cell.variant, method,
                                ribbon(cov, e, options.ribbon_bins), excluded});
        }
      }
    }
  }
  return report;
}

std::string results_matrix_csv(const EvalReport& report) {
  std::ostringstream os;
  os << "scenario,variant,method,mae_m,mae_ci_lo,mae_ci_hi,rel_mae_pct,pearson_r,n,"
        "fold_mae_mean,fold_ci_lo,fold_ci_hi\n";
  for (const auto& c : report.cells) {
    os << c.scenario << ',' << c.variant << ',' << c.method << ',' << fmt(c.mae) << ','
       << fmt(c.ci_lo) << ',' << fmt(c.ci_hi) << ',' << fmt(c.rel_mae_pct) << ','
       << fmt(c.pearson) << ',' << c.n << ',' << fmt(c.fold_mae_mean) << ','
       << fmt(c.fold_ci_lo) << ',' << fmt(c.fold_ci_hi) << '\n';
  }
  return os.str();
}

std::string results_matrix_json(const EvalReport& report) {
  nlohmann::json cells = nlohmann::json::array();
  for (const auto& c : report.cells) {
    cells.push_back({{"scenario", c.scenario},
                     {"variant", c.variant},
                     {"method", c.method},
                     {"n", c.n},
                     {"mae_m", opt_json(c.mae)},
                     {"mae_ci", c.ci_lo ? nlohmann::json::array({*c.ci_lo, *c.ci_hi})
                                        : nlohmann::json(nullptr)},
                     {"rel_mae_pct", opt_json(c.rel_mae_pct)},
                     {"pearson_r", opt_json(c.pearson)},
                     {"fold_mae_mean", opt_json(c.fold_mae_mean)},
                     {"fold_ci", c.fold_ci_lo
                                     ? nlohmann::json::array({*c.fold_ci_lo, *c.fold_ci_hi})
                                     : nlohmann::json(nullptr)}});
  }
  return nlohmann::json{{"cells", cells}}.dump(2) + "\n";
}

std::string ribbon_csv(const RibbonTable& table) {
  std::ostringstream os;
  os << "scenario,variant,method,bin,lo,hi,count,median_abs_err,q1,q3,excluded\n";
  for (const auto& row : table.rows) {
    for (std::size_t b = 0; b < row.bins.size(); ++b) {
      const auto& bin = row.bins[b];
      os << row.scenario << ',' << row.variant << ',' << row.method << ',' << b << ','
         << fmt(bin.lo) << ',' << fmt(bin.hi) << ',' << bin.count << ',' << fmt(bin.median)
         << ',' << fmt(bin.q1) << ',' << fmt(bin.q3) << ',' << row.excluded << '\n';
    }
  }
  return os.str();
}

void write_report(const EvalReport& report, const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  const fs::path root(out_dir);
  write_text_file((root / "results_matrix.csv").string(), results_matrix_csv(report));
  write_text_file((root / "results_matrix.json").string(), results_matrix_json(report));
  for (const auto& t : report.ribbons) {
    write_text_file((root / ("ribbon_" + t.covariate + ".csv")).string(), ribbon_csv(t));
  }
}

}  // namespace rirlab
