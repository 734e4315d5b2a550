// Acceptance suite: one PASS/FAIL line per criterion.
//
//   acceptance [--cli PATH] [--only 1,2,...] [--workdir DIR]
//
// Exit status is 0 only when every selected criterion passes.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "ridgebart/dgp.hpp"
#include "ridgebart/eval.hpp"
#include "ridgebart/predict.hpp"
#include "ridgebart/ridge_leaf.hpp"
#include "ridgebart/rng.hpp"
#include "ridgebart/sampler.hpp"
#include "ridgebart/tree.hpp"
#include "ridgebart/workflow.hpp"

using namespace ridgebart;
namespace fs = std::filesystem;

namespace {

struct Outcome_ {
  bool pass = false;
  std::string detail;
};

struct Options {
  std::string cli;
  fs::path workdir = fs::temp_directory_path() / "ridgebart_acceptance";
  std::set<int> only;
};

Dataset random_data(std::size_t n, std::size_t p, std::size_t q, std::uint64_t seed) {
  Rng rng(seed, 7);
  Dataset d;
  d.n = n;
  d.p = p;
  d.q = q;
  for (std::size_t i = 0; i < n * p; ++i) d.x.push_back(rng.uniform());
  for (std::size_t i = 0; i < n * q; ++i) d.z.push_back(rng.uniform());
  for (std::size_t i = 0; i < n; ++i) d.y.push_back(rng.normal());
  d.variables.levels.assign(p, 0);
  return d;
}

// Regularized lower incomplete gamma by its power series.
double gamma_p_series(double a, double x) {
  double term = 1.0 / a, sum = term;
  for (int k = 1; k < 1000; ++k) {
    term *= x / (a + k);
    sum += term;
    if (term < sum * 1e-17) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// --- 1 ---------------------------------------------------------------------------------
Outcome_ oracle_equivalence() {
  Rng rng(101);
  double worst = 0.0;
  for (int k = 0; k < 200; ++k) {
    const auto n = static_cast<Eigen::Index>(rng.uniform_index(5));
    const auto d = static_cast<Eigen::Index>(1 + rng.uniform_index(2));
    Eigen::MatrixXd phi(n, d);
    Eigen::VectorXd r(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      r[i] = rng.normal(0.0, 2.0);
      for (Eigen::Index j = 0; j < d; ++j) phi(i, j) = std::cos(rng.normal(0.0, 2.0));
    }
    const double sigma2 = rng.uniform(0.05, 4.0), tau = rng.uniform(0.05, 4.0);
    SuffStats s = leaf_suffstats(phi, {r.data(), static_cast<std::size_t>(n)}, sigma2, tau);
    const double base = -0.5 * static_cast<double>(n) * std::log(2.0 * std::numbers::pi * sigma2) -
                        0.5 * r.squaredNorm() / sigma2;
    worst = std::max(worst, std::abs(log_marginal_leaf(s, tau) + base - eval::marginal_oracle(phi, r, sigma2, tau)));
  }
  return {worst <= 1e-8, fmt::format("max |diff| = {:.3e} over 200 leaves (tol 1e-8)", worst)};
}

// --- 2 ---------------------------------------------------------------------------------
Outcome_ vanilla_reduction() {
  Rng rng(202);
  PriorConfig c;
  c.activation = Activation::kConstant;
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const std::size_t n = rng.uniform_index(30), q = 1 + rng.uniform_index(3);
    std::vector<double> z(n * q), r(n);
    for (double& v : z) v = rng.uniform();
    for (double& v : r) v = rng.normal(0.0, 3.0);
    const LeafParams leaf = sample_inner_weights(c, q, rng);
    const Eigen::MatrixXd phi = build_basis(z, q, leaf, Activation::kConstant);
    const double sigma2 = rng.uniform(0.1, 3.0), tau = rng.uniform(0.1, 3.0);
    SuffStats s = leaf_suffstats(phi, r, sigma2, tau);
    double sum = 0.0;
    for (double v : r) sum += v;
    const double p_expected = static_cast<double>(n) / sigma2 + 1.0 / (tau * tau);
    const double t_expected = sum / sigma2;
    worst = std::max(worst, std::abs(s.precision(0, 0) - p_expected) / p_expected);
    worst = std::max(worst, std::abs(s.theta(0) - t_expected) / std::max(1.0, std::abs(t_expected)));
  }
  return {worst <= 1e-12, fmt::format("max relative diff = {:.3e} over 100 leaves (tol 1e-12)", worst)};
}

// --- 3 ---------------------------------------------------------------------------------
Outcome_ lambda_default() {
  const double lambda = solve_lambda(3.0, 1.0, 0.5);
  const double cdf = gamma_p_series(1.5, 1.5 * lambda);
  const bool pass = lambda >= 0.778 && lambda <= 0.798 && std::abs(cdf - 0.5) <= 1e-8;
  return {pass, fmt::format("lambda = {:.6f}, independent CDF at 1 = {:.12f}", lambda, cdf)};
}

// --- 4 ---------------------------------------------------------------------------------
// Random Fourier features from the leaf prior. The random offsets are
// integrated out exactly, leaving the average of cos(omega^T (z - z')).
Outcome_ rff_convergence() {
  Rng rng(404);
  PriorConfig c;
  c.activation = Activation::kCosine;
  c.num_ridge = 5000;
  const std::size_t q = 2;
  double worst = 0.0;
  for (int t = 0; t < 10; ++t) {
    std::vector<double> z(q), w(q);
    for (std::size_t j = 0; j < q; ++j) {
      z[j] = rng.uniform();
      w[j] = rng.uniform();
    }
    const LeafParams leaf = sample_inner_weights(c, q, rng);
    double dist2 = 0.0;
    for (std::size_t j = 0; j < q; ++j) dist2 += (z[j] - w[j]) * (z[j] - w[j]);
    const double exact = std::exp(-dist2 / (2.0 * leaf.rho));
    double avg = 0.0;
    for (Eigen::Index d = 0; d < leaf.omega.cols(); ++d) {
      double proj = 0.0;
      for (std::size_t j = 0; j < q; ++j) proj += leaf.omega(static_cast<Eigen::Index>(j), d) * (z[j] - w[j]);
      avg += std::cos(proj);
    }
    avg /= static_cast<double>(leaf.omega.cols());
    worst = std::max(worst, std::abs(avg - exact));
  }
  return {worst <= 0.02, fmt::format("max |estimate - kernel| = {:.4f} over 10 triples, D=5000 (tol 0.02)", worst)};
}

// --- 5 ---------------------------------------------------------------------------------
struct Stats3 {
  std::vector<double> sigma2, f0, leaves;
};

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

// Standard error of the mean by non-overlapping batch means.
double batch_se(const std::vector<double>& v, std::size_t batches) {
  const std::size_t size = v.size() / batches;
  std::vector<double> means;
  for (std::size_t b = 0; b < batches; ++b) {
    double s = 0.0;
    for (std::size_t i = b * size; i < (b + 1) * size; ++i) s += v[i];
    means.push_back(s / static_cast<double>(size));
  }
  const double m = mean_of(means);
  double ss = 0.0;
  for (double x : means) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(batches - 1) / static_cast<double>(batches));
}

Outcome_ getting_it_right() {
  const Dataset data = random_data(20, 2, 2, 505);
  PriorConfig c;
  c.num_trees = 3;
  c.num_ridge = 1;
  c.activation = Activation::kCosine;
  c.tau = 0.5;
  c.nu_sigma = 10.0;
  c.lambda_sigma = 1.0;
  const std::vector<double> x0{0.3, 0.7}, z0{0.6, 0.2};

  auto record = [&](const Ensemble& e, Stats3& out) {
    out.sigma2.push_back(e.sigma2);
    out.f0.push_back(e.evaluate(x0, z0));
    out.leaves.push_back(static_cast<double>(e.total_leaves()));
  };
  auto simulate_y = [&](const Ensemble& e, Rng& rng) {
    std::vector<double> y(data.n);
    for (std::size_t i = 0; i < data.n; ++i)
      y[i] = e.evaluate(data.x_row(i), data.z_row(i)) + std::sqrt(e.sigma2) * rng.normal();
    return y;
  };

  const std::size_t mc_draws = 20000, sc_draws = 100000;
  Stats3 mc, sc;
  Rng prior_rng(506);
  for (std::size_t k = 0; k < mc_draws; ++k) record(sample_ensemble_prior(c, data.variables, data.q, prior_rng), mc);

  Rng y_rng(507);
  Rng init_rng(508);
  Ensemble start = sample_ensemble_prior(c, data.variables, data.q, init_rng);
  Dataset working = data;
  working.y = simulate_y(start, y_rng);
  ChainState state(working, c, start, Rng(509));
  for (std::size_t k = 0; k < sc_draws; ++k) {
    state.sweep();
    record(state.ensemble(), sc);
    state.set_outcome(simulate_y(state.ensemble(), y_rng));
  }

  bool pass = true;
  std::string detail;
  auto compare = [&](const char* name, const std::vector<double>& a, const std::vector<double>& b) {
    const double se = std::hypot(batch_se(a, 50), batch_se(b, 50));
    const double z = (mean_of(a) - mean_of(b)) / se;
    pass = pass && std::abs(z) <= 3.0;
    detail += fmt::format("{} {:.4f} vs {:.4f} (z={:+.2f}); ", name, mean_of(a), mean_of(b), z);
  };
  compare("sigma2", mc.sigma2, sc.sigma2);
  compare("f(x0,z0)", mc.f0, sc.f0);
  compare("leaves", mc.leaves, sc.leaves);
  detail += fmt::format("{} marginal-conditional / {} successive-conditional draws", mc_draws, sc_draws);
  return {pass, detail};
}

// --- 6 ---------------------------------------------------------------------------------
Outcome_ friedman_benchmark() {
  const auto sim = dgp::generate_friedman(1000, 1.0, 0, 606);
  std::vector<eval::BenchmarkSpec> specs;
  for (auto [label, kind] : {std::pair{"relu", Activation::kRelu}, std::pair{"cosine", Activation::kCosine},
                             std::pair{"constant", Activation::kConstant}}) {
    PriorConfig c;
    c.activation = kind;
    c.num_trees = 50;
    c.num_ridge = 1;
    specs.push_back({label, c, 0.5, 1.0});
  }
  McmcSettings s;
  s.chains = 2;
  s.iterations = 2000;
  s.burn_in = 1000;
  s.thin = 10;
  s.seed = 607;
  const auto rows = eval::run_benchmark(sim, specs, s, 5);
  std::map<std::string, double> mean_rmse;
  for (const auto& r : rows) mean_rmse[r.label] += r.rmse / 5.0;
  const bool pass = mean_rmse["relu"] < mean_rmse["constant"] && mean_rmse["cosine"] < mean_rmse["constant"];
  return {pass, fmt::format("mean RMSE over 5 folds: relu {:.4f}, cosine {:.4f}, constant {:.4f}", mean_rmse["relu"],
                            mean_rmse["cosine"], mean_rmse["constant"])};
}

// --- 7 ---------------------------------------------------------------------------------
Outcome_ recovery_coverage() {
  const auto sim = dgp::generate_recovery(200, 707);
  PriorConfig c;
  c.activation = Activation::kCosine;
  c.num_trees = 50;
  c.num_ridge = 1;
  McmcSettings s;
  s.chains = 2;
  s.iterations = 2000;
  s.burn_in = 1000;
  s.thin = 10;
  s.seed = 708;
  const auto samples = fit_table(sim.table(), sim.schema(), sim.outcome, c, s);
  const auto pred = predict(samples, apply_transform(samples.transform, sim.grid_table()), 0.95);
  std::vector<double> truth;
  for (const auto& g : sim.grid) truth.push_back(g.truth);
  const double cover = eval::pointwise_coverage(pred.summary.lower, pred.summary.upper, truth);
  return {cover >= 0.90, fmt::format("coverage {:.4f} on {} grid points ({} patients, {} rows)", cover, truth.size(),
                                     200, sim.n)};
}

// --- 8 ---------------------------------------------------------------------------------
Outcome_ linear_time() {
  eval::TimingConfig cfg;
  cfg.activation = Activation::kCosine;
  cfg.num_ridge = 1;
  cfg.num_trees = 50;
  cfg.iterations = 20;
  cfg.warmup = 5;
  const std::vector<eval::TimingConfig> grid{cfg};
  const std::vector<std::size_t> sizes{2500, 5000, 10000, 20000};
  const auto report = eval::timing_harness(grid, sizes, 3, 808);
  const double t10 = report.cells[2].median_tree_update_seconds, t20 = report.cells[3].median_tree_update_seconds;
  const double ratio = t20 / t10, slope = report.tree_update_exponent[0];
  const bool pass = ratio <= 3.0 && slope >= 0.8 && slope <= 1.3;
  std::string times;
  for (const auto& cell : report.cells) times += fmt::format("{}:{:.3e}s ", cell.n, cell.median_tree_update_seconds);
  return {pass, fmt::format("ratio 20k/10k = {:.3f}, exponent = {:.3f}; median tree update {}", ratio, slope, times)};
}

// --- 9 ---------------------------------------------------------------------------------
Outcome_ reciprocity() {
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  const Dataset data = random_data(60, 3, 2, 909);
  PriorConfig c;
  c.num_trees = 4;
  c.num_ridge = 2;
  c.tau = 0.4;
  c.lambda_sigma = 0.5;
  ChainState state = ChainState::initialize(data, c, 0.0, Rng(910));
  int cases = 0, failures = 0, skipped = 0;
  double worst = 0.0;
  Rng pick(911);
  while (cases < 1000) {
    state.sweep();
    const std::size_t m = pick.uniform_index(static_cast<std::uint64_t>(c.num_trees));
    std::optional<Proposal> grow;
    for (int attempt = 0; attempt < 200 && !grow; ++attempt) {
      auto p = state.sample_proposal(m);
      if (p && p->kind == MoveKind::kGrow) grow = std::move(p);
    }
    if (!grow) {
      ++skipped;
      continue;
    }
    const RidgeTree original = state.ensemble().trees[m];
    const double forward = state.proposal_log_ratio(m, *grow);
    if (!std::isfinite(forward)) {
      ++skipped;
      continue;
    }
    state.update_tree_with(m, *grow, kNegInf);
    Proposal prune;
    prune.kind = MoveKind::kPrune;
    prune.node = grow->node;
    prune.fresh.emplace(grow->node, original.leaf(grow->node));
    const double backward = state.proposal_log_ratio(m, prune);
    const double err = std::abs(forward + backward) / std::max(1.0, std::abs(forward));
    worst = std::max(worst, err);
    state.update_tree_with(m, prune, kNegInf);
    // Every leaf's beta is redrawn after a move, so compare structure only.
    const bool inverted = state.ensemble().trees[m].same_structure(original);
    // Pure structural inversion on the bare trees as well.
    const RidgeTree there = grow_structure(original, grow->node, grow->rule);
    const bool pure = prune_structure(there, grow->node).same_structure(original);
    if (err > 1e-9 || !inverted || !pure) ++failures;
    ++cases;
  }
  return {failures == 0, fmt::format("{} cases, {} failures, max relative |fwd + bwd| = {:.2e} ({} skipped)", cases,
                                     failures, worst, skipped)};
}

// --- 10 --------------------------------------------------------------------------------
std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome_ determinism(const Options& opt) {
  if (opt.cli.empty()) return {false, "no --cli path given"};
  fs::create_directories(opt.workdir);
  const fs::path data = opt.workdir / "det.csv";
  const fs::path schema = opt.workdir / "det.schema.json";
  auto run = [](const std::string& cmd) { return std::system((cmd + " > /dev/null 2>&1").c_str()); };
  if (run(fmt::format("\"{}\" simulate --dgp friedman --n 200 --seed 11 --out \"{}\"", opt.cli, data.string())) != 0)
    return {false, "simulate failed"};
  std::vector<std::string> contents;
  for (int k = 0; k < 2; ++k) {
    const fs::path model = opt.workdir / fmt::format("det_{}.json", k);
    fs::remove(model);
    const std::string cmd = fmt::format(
        "\"{}\" fit --data \"{}\" --schema \"{}\" --out \"{}\" --seed 42 --chains 2 --iters 300 --burnin 100 --thin 2",
        opt.cli, data.string(), schema.string(), model.string());
    if (run(cmd) != 0) return {false, "fit failed: " + cmd};
    contents.push_back(slurp(model));
  }
  const bool same = !contents[0].empty() && contents[0] == contents[1];
  return {same, fmt::format("two seeded fits: {} bytes each, {}", contents[0].size(),
                            same ? "byte-identical" : "DIFFERENT")};
}

}  // namespace

int main(int argc, char** argv) {
  Options opt;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--cli" && i + 1 < argc) {
      opt.cli = argv[++i];
    } else if (a == "--workdir" && i + 1 < argc) {
      opt.workdir = argv[++i];
    } else if (a == "--only" && i + 1 < argc) {
      std::stringstream list(argv[++i]);
      for (std::string item; std::getline(list, item, ',');) opt.only.insert(std::stoi(item));
    } else {
      std::cerr << "usage: acceptance [--cli PATH] [--only 1,2,...] [--workdir DIR]\n";
      return 2;
    }
  }

  const std::vector<std::pair<std::string, std::function<Outcome_()>>> criteria{
      {"leaf marginal matches dense oracle", oracle_equivalence},
      {"constant activation reduces to scalar leaf", vanilla_reduction},
      {"default lambda", lambda_default},
      {"random Fourier feature convergence", rff_convergence},
      {"getting it right (joint distribution)", getting_it_right},
      {"Friedman benchmark", friedman_benchmark},
      {"recovery curve coverage", recovery_coverage},
      {"linear time tree update", linear_time},
      {"grow/prune reciprocity and inversion", reciprocity},
      {"seeded CLI fit determinism", [&] { return determinism(opt); }},
  };

  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const int id = static_cast<int>(k) + 1;
    if (!opt.only.empty() && !opt.only.contains(id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome_ out;
    try {
      out = criteria[k].second();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << fmt::format("{} [{}] {}: {} ({:.1f}s)", out.pass ? "PASS" : "FAIL", id, criteria[k].first,
                             out.detail, secs)
              << std::endl;
    if (!out.pass) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
