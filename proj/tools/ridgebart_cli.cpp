#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "ridgebart/dgp.hpp"
#include "ridgebart/errors.hpp"
#include "ridgebart/eval.hpp"
#include "ridgebart/predict.hpp"
#include "ridgebart/ridge_leaf.hpp"
#include "ridgebart/sampler.hpp"
#include "ridgebart/serialize.hpp"
#include "ridgebart/workflow.hpp"

namespace rb = ridgebart;
using nlohmann::json;

namespace {

enum ExitCode { kOk = 0, kUsage = 2, kData = 3, kNumeric = 4 };

// Prior flags shared by fit, benchmark and sweep.
struct PriorFlags {
  std::string activation = "cosine";
  int trees = 50;
  int ridge = 1;
  double nu = 3.0;
  double prob_rho_lt = 0.5;
  double rho_threshold = 1.0;
  bool rotate = false;
  double gamma = 0.0;

  void add(CLI::App* app) {
    app->add_option("--activation", activation, "cosine, tanh, relu or constant (vanilla BART)")
        ->check(CLI::IsMember({"cosine", "tanh", "relu", "constant"}))
        ->capture_default_str();
    app->add_option("--trees", trees, "number of trees M")->check(CLI::PositiveNumber)->capture_default_str();
    app->add_option("--ridge", ridge, "ridge functions per leaf D")->check(CLI::PositiveNumber)->capture_default_str();
    app->add_option("--nu", nu, "shape hyperparameter of the leaf scale")->check(CLI::PositiveNumber)->capture_default_str();
    app->add_option("--prob-rho-lt", prob_rho_lt, "prior probability that rho is below --rho-threshold")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    app->add_option("--rho-threshold", rho_threshold, "threshold for --prob-rho-lt")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app->add_flag("--rotate-omega", rotate, "apply a random rotation to each leaf's inner directions");
    app->add_option("--branching-gamma", gamma, "use split probability gamma^(depth+1) instead of 0.95(1+depth)^-2");
  }

  rb::PriorConfig config() const {
    rb::PriorConfig c;
    c.activation = rb::parse_activation(activation);
    c.num_trees = trees;
    c.num_ridge = c.activation == rb::Activation::kConstant ? 1 : ridge;
    c.nu = nu;
    c.lambda = rb::solve_lambda(nu, rho_threshold, prob_rho_lt);
    c.rotate_omega = rotate;
    if (gamma > 0.0) {
      c.branching.kind = rb::Branching::Kind::kGeometric;
      c.branching.gamma = gamma;
    }
    return c;
  }
};

struct ChainFlags {
  int chains = 10;
  int iters = 2000;
  int burnin = 1000;
  int thin = 10;
  std::uint64_t seed = 0;
  int jobs = 0;

  void add(CLI::App* app) {
    app->add_option("--chains", chains, "number of chains")->check(CLI::PositiveNumber)->capture_default_str();
    app->add_option("--iters", iters, "iterations per chain")->check(CLI::NonNegativeNumber)->capture_default_str();
    app->add_option("--burnin", burnin, "iterations discarded per chain")->check(CLI::NonNegativeNumber)->capture_default_str();
    app->add_option("--thin", thin, "keep every thin-th post burn-in draw")->check(CLI::PositiveNumber)->capture_default_str();
    app->add_option("--seed", seed, "base random seed")->capture_default_str();
    app->add_option("--jobs", jobs, "chains run concurrently (0 = all cores)")->check(CLI::NonNegativeNumber)->capture_default_str();
  }

  rb::McmcSettings settings() const {
    rb::McmcSettings s;
    s.chains = chains;
    s.iterations = iters;
    s.burn_in = burnin;
    s.thin = thin;
    s.seed = seed;
    s.jobs = jobs;
    return s;
  }
};

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw rb::DataError(fmt::format("cannot write '{}'", path));
  return out;
}

std::string with_suffix(const std::string& path, const std::string& suffix) {
  std::filesystem::path p(path);
  p.replace_extension();
  return p.string() + suffix;
}

void write_table(const std::string& path, const rb::Table& table) {
  auto out = open_out(path);
  rb::write_csv(out, table);
}

json diagnostics_record(const rb::IterationDiagnostics& d) {
  static const char* names[] = {"grow", "prune", "change"};
  json proposed = json::object(), accepted = json::object();
  for (std::size_t k = 0; k < 3; ++k) {
    proposed[names[k]] = d.moves.proposed[k];
    accepted[names[k]] = d.moves.accepted[k];
  }
  return {{"chain", d.chain},       {"iteration", d.iteration}, {"sigma2", d.sigma2},
          {"log_likelihood", d.log_likelihood}, {"leaves", d.leaves}, {"proposed", proposed},
          {"accepted", accepted},   {"jitter_events", d.jitter_events}};
}

int run_fit(const std::string& data, const std::string& schema, const std::string& outcome, const PriorFlags& prior,
            const ChainFlags& chain, const std::string& out, const std::string& diagnostics) {
  const rb::Table table = rb::read_csv_file(data);
  std::vector<rb::IterationDiagnostics> diags;
  const rb::PosteriorSamples samples = rb::fit_table(table, rb::Schema::load(schema), rb::parse_outcome(outcome),
                                                     prior.config(), chain.settings(), &diags);
  rb::save_model(out, samples);
  if (!diagnostics.empty()) {
    auto stream = open_out(diagnostics);
    for (const auto& d : diags) stream << diagnostics_record(d).dump() << '\n';
  }
  std::cout << fmt::format("{} draws from {} chains written to {}\n", samples.draws.size(), samples.chains, out);
  return kOk;
}

int run_predict(const std::string& model, const std::string& data, double level, const std::string& out) {
  const rb::PosteriorSamples samples = rb::load_model(model);
  const rb::Table table = rb::read_csv_file(data);
  const rb::Prediction pred = rb::predict(samples, rb::apply_transform(samples.transform, table), level);
  rb::Table result;
  result.names = {"row", samples.outcome == rb::Outcome::kBinary ? "prob" : "mean", "lower", "upper"};
  for (std::size_t i = 0; i < pred.rows; ++i)
    result.rows.push_back({std::to_string(i), fmt::format("{}", pred.summary.mean[i]),
                           fmt::format("{}", pred.summary.lower[i]), fmt::format("{}", pred.summary.upper[i])});
  write_table(out, result);
  return kOk;
}

int run_simulate(const std::string& dgp, std::size_t n, std::uint64_t seed, double sigma, std::size_t p_extra,
                 const std::string& out, std::string truth, std::string schema) {
  const rb::dgp::Simulation sim =
      dgp == "friedman" ? rb::dgp::generate_friedman(n, sigma, p_extra, seed) : rb::dgp::generate(dgp, n, seed);
  if (truth.empty()) truth = with_suffix(out, ".truth.csv");
  if (schema.empty()) schema = with_suffix(out, ".schema.json");
  write_table(out, sim.table());
  write_table(truth, sim.truth_table());
  open_out(schema) << sim.schema().dump() << '\n';
  if (!sim.grid.empty()) write_table(with_suffix(out, ".grid.csv"), sim.grid_table());
  std::cout << fmt::format("{} rows written to {}\n", sim.n, out);
  return kOk;
}

std::vector<rb::eval::BenchmarkSpec> benchmark_specs(const std::vector<std::string>& activations,
                                                     const PriorFlags& prior) {
  std::vector<rb::eval::BenchmarkSpec> specs;
  bool has_constant = false;
  for (const auto& name : activations) {
    PriorFlags p = prior;
    p.activation = name;
    rb::eval::BenchmarkSpec s{name, p.config(), prior.prob_rho_lt, prior.rho_threshold};
    has_constant = has_constant || s.config.activation == rb::Activation::kConstant;
    specs.push_back(s);
  }
  if (!has_constant) {
    PriorFlags p = prior;
    p.activation = "constant";
    specs.push_back({"constant", p.config(), prior.prob_rho_lt, prior.rho_threshold});
  }
  return specs;
}

void report_benchmark(const std::vector<rb::eval::BenchmarkRow>& rows, const std::string& out) {
  if (!out.empty()) {
    auto stream = open_out(out);
    rb::eval::write_benchmark_csv(stream, rows);
  }
  std::cout << rb::eval::benchmark_summary(rows);
}

int exit_code_for(const rb::Error& e) {
  if (dynamic_cast<const rb::NumericalError*>(&e)) return kNumeric;
  if (dynamic_cast<const rb::ConfigError*>(&e)) return kUsage;
  return kData;
}

void report_error(int code, const std::string& kind, const std::string& message) {
  std::cerr << json{{"error", kind}, {"exit_code", code}, {"message", message}}.dump() << std::endl;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ridgebart: sum-of-trees regression with ridge-function leaves"};
  app.require_subcommand(1);

  PriorFlags prior;
  ChainFlags chain;

  auto* fit = app.add_subcommand("fit", "run the sampler and write a model file");
  std::string data, schema, outcome = "gaussian", out, diagnostics;
  fit->add_option("--data", data, "training CSV with a header row")->required()->check(CLI::ExistingFile);
  fit->add_option("--schema", schema, "JSON column-role schema")->required()->check(CLI::ExistingFile);
  fit->add_option("--outcome", outcome, "gaussian or binary")
      ->check(CLI::IsMember({"gaussian", "binary"}))
      ->capture_default_str();
  prior.add(fit);
  chain.add(fit);
  fit->add_option("--out", out, "model file to write")->required();
  fit->add_option("--diagnostics", diagnostics, "newline-delimited JSON per-iteration diagnostics");

  auto* pred = app.add_subcommand("predict", "posterior mean and credible intervals for new rows");
  std::string model;
  double level = 0.95;
  pred->add_option("--model", model, "model file from fit")->required()->check(CLI::ExistingFile);
  pred->add_option("--data", data, "CSV with the training covariate columns")->required()->check(CLI::ExistingFile);
  pred->add_option("--level", level, "credible level")->check(CLI::Range(0.0, 1.0))->capture_default_str();
  pred->add_option("--out", out, "CSV to write")->required();

  auto* sim = app.add_subcommand("simulate", "write a synthetic data set, its truth and its schema");
  std::string dgp = "friedman", truth, schema_out;
  std::size_t n = 1000, p_extra = 0;
  double sigma = 1.0;
  std::uint64_t seed = 0;
  sim->add_option("--dgp", dgp, "recovery, friedman or binary")->capture_default_str();
  sim->add_option("--n", n, "rows (patients for recovery)")->check(CLI::PositiveNumber)->capture_default_str();
  sim->add_option("--seed", seed, "random seed")->capture_default_str();
  sim->add_option("--sigma", sigma, "friedman noise sd")->capture_default_str();
  sim->add_option("--p-extra", p_extra, "friedman inert covariates")->capture_default_str();
  sim->add_option("--out", out, "data CSV")->required();
  sim->add_option("--truth", truth, "truth CSV (default <out>.truth.csv)");
  sim->add_option("--schema-out", schema_out, "schema JSON (default <out>.schema.json)");

  auto* bench = app.add_subcommand("benchmark", "cross-validated comparison against the constant-leaf baseline");
  std::vector<std::string> activations{"cosine", "relu"};
  int folds = 5;
  bench->add_option("--dgp", dgp, "recovery, friedman or binary")->capture_default_str();
  bench->add_option("--n", n, "rows (patients for recovery)")->check(CLI::PositiveNumber)->capture_default_str();
  bench->add_option("--activations", activations, "ridge activations to compare")
      ->delimiter(',')
      ->check(CLI::IsMember({"cosine", "tanh", "relu", "constant"}))
      ->capture_default_str();
  bench->add_option("--folds", folds, "cross-validation folds (1 = single 80/20 split)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  bench->add_option("--level", level, "credible level")->check(CLI::Range(0.0, 1.0))->capture_default_str();
  bench->add_option("--out", out, "results CSV");

  auto* sweep = app.add_subcommand("sweep", "sensitivity grid over (M, D) or the rho prior");
  std::string grid = "trees";
  sweep->add_option("--grid", grid, "trees (M x D) or rho (p x q)")
      ->check(CLI::IsMember({"trees", "rho"}))
      ->capture_default_str();
  sweep->add_option("--dgp", dgp, "recovery, friedman or binary")->capture_default_str();
  sweep->add_option("--n", n, "rows (patients for recovery)")->check(CLI::PositiveNumber)->capture_default_str();
  sweep->add_option("--folds", folds, "cross-validation folds (1 = single 80/20 split)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sweep->add_option("--level", level, "credible level")->check(CLI::Range(0.0, 1.0))->capture_default_str();
  sweep->add_option("--out", out, "results CSV");

  // benchmark and sweep take the same prior and chain flags as fit, with
  // lighter chain defaults.
  PriorFlags bench_prior;
  ChainFlags bench_chain;
  bench_chain.chains = 2;
  bench_prior.add(bench);
  bench_chain.add(bench);
  PriorFlags sweep_prior;
  ChainFlags sweep_chain;
  sweep_chain.chains = 2;
  sweep_prior.add(sweep);
  sweep_chain.add(sweep);

  auto* timing = app.add_subcommand("timing", "per-iteration and per-tree-update wall time across data sizes");
  std::vector<std::size_t> sizes{2500, 5000, 10000, 20000};
  std::vector<int> ridges{1};
  int reps = 3, timing_iters = 20, timing_trees = 50;
  std::string timing_activation = "constant";
  timing->add_option("--sizes", sizes, "data sizes")->delimiter(',')->capture_default_str();
  timing->add_option("--ridge", ridges, "ridge counts D")->delimiter(',')->capture_default_str();
  timing->add_option("--activation", timing_activation, "activation")
      ->check(CLI::IsMember({"cosine", "tanh", "relu", "constant"}))
      ->capture_default_str();
  timing->add_option("--trees", timing_trees, "number of trees")->capture_default_str();
  timing->add_option("--iters", timing_iters, "timed iterations per chain")->capture_default_str();
  timing->add_option("--reps", reps, "chains per size")->capture_default_str();
  timing->add_option("--seed", seed, "random seed")->capture_default_str();
  timing->add_option("--out", out, "results CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    report_error(kUsage, "usage", e.what());
    return kUsage;
  }

  try {
    if (fit->parsed()) return run_fit(data, schema, outcome, prior, chain, out, diagnostics);
    if (pred->parsed()) return run_predict(model, data, level, out);
    if (sim->parsed()) return run_simulate(dgp, n, seed, sigma, p_extra, out, truth, schema_out);
    if (bench->parsed()) {
      const auto simulation = rb::dgp::generate(dgp, n, bench_chain.seed);
      report_benchmark(rb::eval::run_benchmark(simulation, benchmark_specs(activations, bench_prior),
                                               bench_chain.settings(), folds, level),
                       out);
      return kOk;
    }
    if (sweep->parsed()) {
      const auto simulation = rb::dgp::generate(dgp, n, sweep_chain.seed);
      report_benchmark(rb::eval::run_benchmark(simulation, rb::eval::sweep_grid(grid, sweep_prior.config()),
                                               sweep_chain.settings(), folds, level),
                       out);
      return kOk;
    }
    if (timing->parsed()) {
      std::vector<rb::eval::TimingConfig> configs;
      for (int d : ridges) {
        rb::eval::TimingConfig c;
        c.activation = rb::parse_activation(timing_activation);
        c.num_ridge = d;
        c.num_trees = timing_trees;
        c.iterations = timing_iters;
        configs.push_back(c);
      }
      const auto report = rb::eval::timing_harness(configs, sizes, reps, seed);
      if (!out.empty()) {
        auto stream = open_out(out);
        rb::eval::write_timing_csv(stream, report);
      }
      std::cout << rb::eval::timing_summary(report);
      return kOk;
    }
  } catch (const rb::Error& e) {
    const int code = exit_code_for(e);
    report_error(code, e.kind(), e.what());
    return code;
  } catch (const std::exception& e) {
    report_error(kData, "io", e.what());
    return kData;
  }
  return kUsage;
}
