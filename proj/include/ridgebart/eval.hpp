#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ridgebart/core.hpp"
#include "ridgebart/dgp.hpp"
#include "ridgebart/sampler.hpp"

namespace ridgebart::eval {

inline constexpr double kProbClip = 1e-12;

/// All three throw DimensionMismatchError on length mismatch.
double rmse(std::span<const double> pred, std::span<const double> truth);
/// Mean negative Bernoulli log-likelihood with probabilities clipped to
/// [1e-12, 1 - 1e-12].
double logloss(std::span<const double> prob, std::span<const double> labels);
double pointwise_coverage(std::span<const double> lower, std::span<const double> upper,
                          std::span<const double> truth);

/// log N(r; 0, sigma2 I + tau^2 Phi Phi^T), evaluated densely.
double marginal_oracle(const Eigen::MatrixXd& phi, const Eigen::VectorXd& r, double sigma2, double tau);

/// Balanced fold labels in [0, folds), shuffled deterministically by seed.
std::vector<int> fold_assignment(std::size_t n, int folds, std::uint64_t seed);

// --- cross-validated benchmark ---------------------------------------------------

struct BenchmarkRow {
  std::string label;
  Activation activation = Activation::kCosine;
  int num_trees = 0;
  int num_ridge = 0;
  double rho_prob = 0.0;
  double rho_threshold = 0.0;
  int fold = 0;
  std::size_t n_train = 0;
  std::size_t n_test = 0;
  /// Against the noise-free truth (f, or the success probability).
  double rmse = 0.0;
  /// Binary outcomes only, NaN otherwise.
  double logloss = 0.0;
  double coverage = 0.0;
  double seconds = 0.0;
};

struct BenchmarkSpec {
  std::string label;
  PriorConfig config;
  /// Reported only; the caller sets config.lambda accordingly.
  double rho_prob = 0.5;
  double rho_threshold = 1.0;
};

/// Fits every spec on each of `folds` train/test splits (a single 80/20
/// split when folds == 1) and scores the held-out rows.
std::vector<BenchmarkRow> run_benchmark(const dgp::Simulation& sim, std::span<const BenchmarkSpec> specs,
                                        const McmcSettings& settings, int folds, double level = 0.95);

void write_benchmark_csv(std::ostream& out, std::span<const BenchmarkRow> rows);
/// Per-label means of the metrics.
std::string benchmark_summary(std::span<const BenchmarkRow> rows);

/// The sensitivity grids: "trees" crosses M in {10, 50, 100} with D in
/// {1, 5, 10}; "rho" crosses P(rho < q) = p for p in {0.25, 0.5, 0.75} and q
/// in {0.5, 1, 2}. Throws ConfigError on other names.
std::vector<BenchmarkSpec> sweep_grid(const std::string& which, const PriorConfig& base);

// --- timing ------------------------------------------------------------------------

struct TimingConfig {
  Activation activation = Activation::kConstant;
  int num_ridge = 1;
  int num_trees = 50;
  int iterations = 20;
  int warmup = 5;
};

struct TimingCell {
  TimingConfig config;
  std::size_t n = 0;
  double median_iteration_seconds = 0.0;
  double median_tree_update_seconds = 0.0;
  double mean_leaves = 0.0;
};

struct TimingReport {
  std::vector<TimingCell> cells;
  /// Log-log slope of median tree-update time against n, per config (in
  /// input order); NaN with fewer than two sizes.
  std::vector<double> tree_update_exponent;
  std::vector<double> iteration_exponent;
};

/// Short chains on Friedman data of each size. Zero repetitions gives an
/// empty report.
TimingReport timing_harness(std::span<const TimingConfig> grid, std::span<const std::size_t> sizes,
                            int repetitions, std::uint64_t seed);

/// Least-squares slope of log(y) on log(x).
double loglog_slope(std::span<const double> x, std::span<const double> y);

void write_timing_csv(std::ostream& out, const TimingReport& report);
std::string timing_summary(const TimingReport& report);

}  // namespace ridgebart::eval
