#include "ridgebart/eval.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>
#include <ostream>

#include <fmt/format.h>

#include "ridgebart/errors.hpp"
#include "ridgebart/kernels.hpp"
#include "ridgebart/predict.hpp"
#include "ridgebart/ridge_leaf.hpp"
#include "ridgebart/rng.hpp"
#include "ridgebart/workflow.hpp"

namespace ridgebart::eval {

namespace {

void same_length(std::size_t a, std::size_t b) {
  if (a != b) throw DimensionMismatchError(fmt::format("length mismatch: {} vs {}", a, b));
}

double median(std::vector<double> v) {
  if (v.empty()) return NAN;
  std::sort(v.begin(), v.end());
  return kernels::quantile_sorted(v, 0.5);
}

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string metric(double v) { return std::isnan(v) ? std::string() : fmt::format("{}", v); }

}  // namespace

double rmse(std::span<const double> pred, std::span<const double> truth) {
  same_length(pred.size(), truth.size());
  if (pred.empty()) return 0.0;
  double s = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) s += (pred[i] - truth[i]) * (pred[i] - truth[i]);
  return std::sqrt(s / static_cast<double>(pred.size()));
}

double logloss(std::span<const double> prob, std::span<const double> labels) {
  same_length(prob.size(), labels.size());
  if (prob.empty()) return 0.0;
  double s = 0.0;
  for (std::size_t i = 0; i < prob.size(); ++i) {
    const double p = std::clamp(prob[i], kProbClip, 1.0 - kProbClip);
    s -= labels[i] > 0.5 ? std::log(p) : std::log1p(-p);
  }
  return s / static_cast<double>(prob.size());
}

double pointwise_coverage(std::span<const double> lower, std::span<const double> upper,
                          std::span<const double> truth) {
  same_length(lower.size(), truth.size());
  same_length(upper.size(), truth.size());
  if (truth.empty()) return 0.0;
  std::size_t hit = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) hit += (lower[i] <= truth[i] && truth[i] <= upper[i]) ? 1 : 0;
  return static_cast<double>(hit) / static_cast<double>(truth.size());
}

double marginal_oracle(const Eigen::MatrixXd& phi, const Eigen::VectorXd& r, double sigma2, double tau) {
  same_length(static_cast<std::size_t>(phi.rows()), static_cast<std::size_t>(r.size()));
  const Eigen::Index n = r.size();
  const Eigen::MatrixXd cov =
      sigma2 * Eigen::MatrixXd::Identity(n, n) + tau * tau * phi * phi.transpose();
  const Eigen::LDLT<Eigen::MatrixXd> ldlt(cov);
  const double logdet = ldlt.vectorD().array().log().sum();
  const double quad = r.dot(ldlt.solve(r));
  return -0.5 * (static_cast<double>(n) * std::log(2.0 * std::numbers::pi) + logdet + quad);
}

std::vector<int> fold_assignment(std::size_t n, int folds, std::uint64_t seed) {
  if (folds < 1) throw ConfigError("need at least one fold");
  std::vector<int> labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = static_cast<int>(i % static_cast<std::size_t>(folds));
  Rng rng(seed, 0xf01d);
  for (std::size_t i = n; i > 1; --i) std::swap(labels[i - 1], labels[rng.uniform_index(i)]);
  return labels;
}

std::vector<BenchmarkRow> run_benchmark(const dgp::Simulation& sim, std::span<const BenchmarkSpec> specs,
                                        const McmcSettings& settings, int folds, double level) {
  const Table table = sim.table();
  const Schema schema = sim.schema();
  const int splits = folds == 1 ? 5 : folds;
  const std::vector<int> labels = fold_assignment(sim.n, splits, settings.seed);

  std::vector<BenchmarkRow> rows;
  for (int f = 0; f < folds; ++f) {
    std::vector<std::size_t> train, test;
    for (std::size_t i = 0; i < sim.n; ++i) (labels[i] == f ? test : train).push_back(i);
    const Table train_table = select_rows(table, train);
    const Table test_table = select_rows(table, test);
    std::vector<double> truth, observed;
    for (std::size_t i : test) {
      truth.push_back(sim.truth[i]);
      observed.push_back(sim.y[i]);
    }
    McmcSettings fold_settings = settings;
    fold_settings.seed = Rng::mix(settings.seed, static_cast<std::uint64_t>(f));

    for (const auto& spec : specs) {
      const auto start = Clock::now();
      const PosteriorSamples samples = fit_table(train_table, schema, sim.outcome, spec.config, fold_settings);
      const double elapsed = seconds_since(start);
      const Prediction pred = predict(samples, apply_transform(samples.transform, test_table), level);

      BenchmarkRow row;
      row.label = spec.label;
      row.activation = spec.config.activation;
      row.num_trees = spec.config.num_trees;
      row.num_ridge = spec.config.basis_size();
      row.rho_prob = spec.rho_prob;
      row.rho_threshold = spec.rho_threshold;
      row.fold = f;
      row.n_train = train.size();
      row.n_test = test.size();
      row.rmse = rmse(pred.summary.mean, truth);
      row.logloss = sim.outcome == Outcome::kBinary ? logloss(pred.summary.mean, observed) : NAN;
      row.coverage = pointwise_coverage(pred.summary.lower, pred.summary.upper, truth);
      row.seconds = elapsed;
      rows.push_back(row);
    }
  }
  return rows;
}

void write_benchmark_csv(std::ostream& out, std::span<const BenchmarkRow> rows) {
  out << "label,activation,trees,ridge,rho_prob,rho_threshold,fold,n_train,n_test,rmse,logloss,coverage,time\n";
  for (const auto& r : rows)
    out << fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{}\n", r.label, to_string(r.activation), r.num_trees,
                       r.num_ridge, r.rho_prob, r.rho_threshold, r.fold, r.n_train, r.n_test, r.rmse,
                       metric(r.logloss), r.coverage, r.seconds);
}

std::string benchmark_summary(std::span<const BenchmarkRow> rows) {
  std::vector<std::string> order;
  std::map<std::string, std::vector<const BenchmarkRow*>> groups;
  for (const auto& r : rows) {
    if (!groups.contains(r.label)) order.push_back(r.label);
    groups[r.label].push_back(&r);
  }
  std::string out = fmt::format("{:<24} {:>10} {:>10} {:>10} {:>10}\n", "model", "rmse", "logloss", "coverage", "time");
  for (const auto& label : order) {
    const auto& g = groups[label];
    double rm = 0, ll = 0, cv = 0, t = 0;
    for (const auto* r : g) {
      rm += r->rmse;
      ll += r->logloss;
      cv += r->coverage;
      t += r->seconds;
    }
    const auto k = static_cast<double>(g.size());
    out += fmt::format("{:<24} {:>10.4f} {:>10} {:>10.3f} {:>10.2f}\n", label, rm / k,
                       std::isnan(ll) ? std::string("-") : fmt::format("{:.4f}", ll / k), cv / k, t / k);
  }
  return out;
}

std::vector<BenchmarkSpec> sweep_grid(const std::string& which, const PriorConfig& base) {
  std::vector<BenchmarkSpec> specs;
  if (which == "trees") {
    for (int m : {10, 50, 100})
      for (int d : {1, 5, 10}) {
        BenchmarkSpec s{fmt::format("M{}_D{}", m, d), base};
        s.config.num_trees = m;
        s.config.num_ridge = d;
        specs.push_back(s);
      }
  } else if (which == "rho") {
    for (double p : {0.25, 0.5, 0.75})
      for (double q : {0.5, 1.0, 2.0}) {
        BenchmarkSpec s{fmt::format("p{}_q{}", p, q), base, p, q};
        s.config.lambda = solve_lambda(base.nu, q, p);
        specs.push_back(s);
      }
  } else {
    throw ConfigError(fmt::format("unknown sweep grid '{}'", which));
  }
  return specs;
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
  same_length(x.size(), y.size());
  if (x.size() < 2) return NAN;
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(x.size());
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

TimingReport timing_harness(std::span<const TimingConfig> grid, std::span<const std::size_t> sizes,
                            int repetitions, std::uint64_t seed) {
  TimingReport report;
  if (repetitions <= 0) return report;
  for (std::size_t c = 0; c < grid.size(); ++c) {
    const TimingConfig& tc = grid[c];
    std::vector<double> ns, tree_times, iter_times;
    for (std::size_t n : sizes) {
      const dgp::Simulation sim = dgp::generate_friedman(n, 1.0, 0, Rng::mix(seed, n));
      const Preprocessed pre = preprocess(sim.table(), sim.schema(), sim.outcome);
      PriorConfig config;
      config.activation = tc.activation;
      config.num_ridge = tc.num_ridge;
      config.num_trees = tc.num_trees;
      calibrate_prior(config, pre.data, pre.transform.y_min, pre.transform.y_max);

      std::vector<double> per_tree, per_iter;
      double leaves = 0.0;
      for (int rep = 0; rep < repetitions; ++rep) {
        ChainState state = ChainState::initialize(pre.data, config, pre.transform.y_center,
                                                  Rng(seed, static_cast<std::uint64_t>(rep)));
        for (int it = 0; it < tc.warmup + tc.iterations; ++it) {
          const auto iter_start = Clock::now();
          for (std::size_t m = 0; m < static_cast<std::size_t>(config.num_trees); ++m) {
            const auto start = Clock::now();
            state.update_tree(m);
            if (it >= tc.warmup) per_tree.push_back(seconds_since(start));
          }
          state.update_sigma2();
          if (it >= tc.warmup) per_iter.push_back(seconds_since(iter_start));
        }
        leaves += static_cast<double>(state.ensemble().total_leaves()) / config.num_trees;
      }
      TimingCell cell{tc, n, median(per_iter), median(per_tree), leaves / repetitions};
      report.cells.push_back(cell);
      ns.push_back(static_cast<double>(n));
      tree_times.push_back(cell.median_tree_update_seconds);
      iter_times.push_back(cell.median_iteration_seconds);
    }
    report.tree_update_exponent.push_back(loglog_slope(ns, tree_times));
    report.iteration_exponent.push_back(loglog_slope(ns, iter_times));
  }
  return report;
}

void write_timing_csv(std::ostream& out, const TimingReport& report) {
  out << "activation,ridge,trees,n,median_iteration_seconds,median_tree_update_seconds,mean_leaves_per_tree\n";
  for (const auto& c : report.cells)
    out << fmt::format("{},{},{},{},{},{},{}\n", to_string(c.config.activation), c.config.num_ridge,
                       c.config.num_trees, c.n, c.median_iteration_seconds, c.median_tree_update_seconds,
                       c.mean_leaves);
}

std::string timing_summary(const TimingReport& report) {
  std::string out;
  std::size_t k = 0;
  for (std::size_t c = 0; c < report.tree_update_exponent.size(); ++c) {
    const TimingConfig& tc = report.cells.at(k).config;
    out += fmt::format("{} D={} M={}: tree-update exponent {:.3f}, iteration exponent {:.3f}\n",
                       to_string(tc.activation), tc.num_ridge, tc.num_trees, report.tree_update_exponent[c],
                       report.iteration_exponent[c]);
    while (k < report.cells.size() && report.cells[k].config.activation == tc.activation &&
           report.cells[k].config.num_ridge == tc.num_ridge && report.cells[k].config.num_trees == tc.num_trees) {
      const auto& cell = report.cells[k];
      out += fmt::format("  n={:<8} iteration {:.3e} s, tree update {:.3e} s, {:.2f} leaves/tree\n", cell.n,
                         cell.median_iteration_seconds, cell.median_tree_update_seconds, cell.mean_leaves);
      ++k;
    }
  }
  return out;
}

}  // namespace ridgebart::eval
