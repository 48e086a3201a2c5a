#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rng.hpp"

namespace rirlab {

struct Manifest;

double mae(std::span<const double> y_true, std::span<const double> y_pred);
// Fraction, not percent.
double relative_mae(std::span<const double> y_true, std::span<const double> y_pred);

struct ConfidenceInterval {
  double lo = 0.0;
  double hi = 0.0;
};

inline constexpr int kDefaultBootstrapRounds = 2000;

// Percentile bootstrap of the mean.
ConfidenceInterval bootstrap_ci(std::span<const double> values, Rng& rng, double level = 0.95,
                                int rounds = kDefaultBootstrapRounds);

double pearson_r(std::span<const double> x, std::span<const double> y);
double spearman_rho(std::span<const double> x, std::span<const double> y);

// Linear-interpolation quantile of sorted data (q in [0, 1]).
double quantile_sorted(std::span<const double> sorted, double q);

struct RibbonBin {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t count = 0;
  // Absent for empty bins.
  std::optional<double> median;
  std::optional<double> q1;
  std::optional<double> q3;
};

// Equal-width bins over [min, max] of the covariate; the maximum lands in
// the last bin.
std::vector<RibbonBin> ribbon(std::span<const double> covariate,
                              std::span<const double> abs_errors, int n_bins = 10);

struct PredictionRow {
  std::string sample_id;
  std::string scenario;
  std::string variant;
  std::string method;
  double r_true = 0.0;
  double r_hat = 0.0;
};

std::vector<PredictionRow> read_predictions_csv(const std::string& path);
std::vector<PredictionRow> parse_predictions_csv(const std::string& text);
std::string predictions_to_csv(const std::vector<PredictionRow>& rows);

struct EvalCell {
  std::string scenario;
  std::string variant;
  std::string method;
  std::size_t n = 0;
  // All statistics are absent when n == 0 (missing cell).
  std::optional<double> mae;
  std::optional<double> ci_lo;
  std::optional<double> ci_hi;
  std::optional<double> rel_mae_pct;
  std::optional<double> pearson;  // absent for constant predictions
  // Across CV folds: mean of per-fold MAE with a t-based 95 % interval.
  std::optional<double> fold_mae_mean;
  std::optional<double> fold_ci_lo;
  std::optional<double> fold_ci_hi;
};

struct RibbonTable {
  std::string covariate;  // distance, drr, c50, t60
  struct Row {
    std::string scenario;
    std::string variant;
    std::string method;
    std::vector<RibbonBin> bins;
    std::size_t excluded = 0;  // unbounded covariate values left out
  };
  std::vector<Row> rows;
};

struct EvalReport {
  std::vector<EvalCell> cells;
  std::vector<RibbonTable> ribbons;
};

struct EvalOptions {
  std::uint64_t seed = 0;
  int bootstrap_rounds = kDefaultBootstrapRounds;
  int ribbon_bins = 10;
};

// One cell per (scenario, variant, method) over all four scenarios and
// variants for every method present. UnknownSampleId when a prediction
// references an id the manifest lacks.
EvalReport build_matrix(const std::vector<PredictionRow>& predictions,
                        const Manifest& manifest, const EvalOptions& options = {});

std::string results_matrix_csv(const EvalReport& report);
std::string results_matrix_json(const EvalReport& report);
std::string ribbon_csv(const RibbonTable& table);

// Writes results_matrix.csv, results_matrix.json and ribbon_<covariate>.csv.
void write_report(const EvalReport& report, const std::string& out_dir);

}  // namespace rirlab
