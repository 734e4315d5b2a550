#include "ridgebart/dgp.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "ridgebart/errors.hpp"
#include "ridgebart/predict.hpp"
#include "ridgebart/rng.hpp"

namespace ridgebart::dgp {

namespace {

constexpr std::size_t kRecoveryP = 6;

std::string cell(double v) { return fmt::format("{}", v); }

std::vector<std::string> numbered(std::string_view stem, std::size_t count) {
  std::vector<std::string> out;
  for (std::size_t j = 1; j <= count; ++j) out.push_back(fmt::format("{}{}", stem, j));
  return out;
}

void uniform_row(Rng& rng, std::size_t p, std::vector<double>& out) {
  for (std::size_t j = 0; j < p; ++j) out.push_back(rng.uniform());
}

std::vector<double> follow_up_times(std::size_t count, Rng& rng) {
  std::vector<double> times;
  if (count <= kFollowUpGrid.size()) {
    std::array<double, 9> pool = kFollowUpGrid;
    for (std::size_t k = 0; k < count; ++k) {
      const std::size_t pick = k + rng.uniform_index(pool.size() - k);
      std::swap(pool[k], pool[pick]);
      times.push_back(pool[k]);
    }
  } else {
    for (std::size_t k = 0; k < count; ++k) times.push_back(kFollowUpGrid[rng.uniform_index(kFollowUpGrid.size())]);
  }
  std::sort(times.begin(), times.end());
  for (double& t : times) t = std::clamp(t + rng.uniform(-0.5, 0.5), 0.0, kMaxTime);
  return times;
}

}  // namespace

double recovery_a(std::span<const double> x) {
  return 0.5 * std::abs(1.0 / (1.0 + std::exp(-2.0 * x[0])) - 0.5) - 0.5;
}

double recovery_b(std::span<const double> x) { return 1.0 + std::min(0.0, 0.15 * std::cos(5.0 * x[1])); }

double recovery_c(std::span<const double> x) { return 5.0 * std::exp(x[2]); }

double recovery_curve(std::span<const double> x, double z) {
  return (1.0 - recovery_a(x)) * (1.0 - recovery_b(x) * std::exp(-z * recovery_c(x)));
}

double friedman(std::span<const double> x) {
  return std::sin(std::numbers::pi * x[0] * x[1]) + 20.0 * (x[2] - 0.5) * (x[2] - 0.5) + 10.0 * x[3] + 5.0 * x[4];
}

Dataset Simulation::dataset() const {
  Dataset d;
  d.n = n;
  d.p = p;
  d.q = q();
  d.x = x;
  d.z = z_is_x ? x : z;
  if (!z_is_x)
    for (double& v : d.z) v /= z_scale;
  d.y = y;
  d.outcome = outcome;
  d.variables.levels.assign(p, 0);
  return d;
}

Table Simulation::table() const {
  Table t;
  if (!group.empty()) t.names.push_back("patient");
  t.names.insert(t.names.end(), x_names.begin(), x_names.end());
  if (!z_is_x) t.names.insert(t.names.end(), z_names.begin(), z_names.end());
  t.names.push_back("y");
  const std::size_t qz = z_is_x ? 0 : q();
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::string> row;
    if (!group.empty()) row.push_back(std::to_string(group[i]));
    for (std::size_t j = 0; j < p; ++j) row.push_back(cell(x[i * p + j]));
    for (std::size_t k = 0; k < qz; ++k) row.push_back(cell(z[i * qz + k]));
    row.push_back(outcome == Outcome::kBinary ? std::to_string(static_cast<int>(y[i])) : cell(y[i]));
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table Simulation::truth_table() const {
  Table t;
  t.names = {"row", outcome == Outcome::kBinary ? "prob" : "f"};
  for (std::size_t i = 0; i < n; ++i) t.rows.push_back({std::to_string(i), cell(truth[i])});
  return t;
}

Table Simulation::grid_table() const {
  Table t;
  t.names.push_back("patient");
  t.names.insert(t.names.end(), x_names.begin(), x_names.end());
  t.names.insert(t.names.end(), z_names.begin(), z_names.end());
  t.names.push_back("f");
  // The first row of each patient carries its covariates.
  std::vector<std::size_t> first(grid.empty() ? 0 : static_cast<std::size_t>(group.back()) + 1, n);
  for (std::size_t i = n; i-- > 0;) first[static_cast<std::size_t>(group[i])] = i;
  for (const auto& g : grid) {
    const std::size_t i = first[static_cast<std::size_t>(g.group)];
    std::vector<std::string> row{std::to_string(g.group)};
    for (std::size_t j = 0; j < p; ++j) row.push_back(cell(x[i * p + j]));
    row.push_back(cell(g.z));
    row.push_back(cell(g.truth));
    t.rows.push_back(std::move(row));
  }
  return t;
}

Schema Simulation::schema() const {
  Schema s;
  if (!group.empty()) s.columns.push_back({"patient", Role::kIgnore});
  for (const auto& name : x_names) s.columns.push_back({name, z_is_x ? Role::kBoth : Role::kX});
  if (!z_is_x)
    for (const auto& name : z_names) s.columns.push_back({name, Role::kZ});
  s.columns.push_back({"y", Role::kOutcome});
  return s;
}

Simulation generate_recovery(std::size_t n_patients, std::uint64_t seed) {
  if (n_patients < 1) throw ConfigError("recovery simulation needs at least one patient");
  Rng rng(seed);
  Simulation s;
  s.name = "recovery";
  s.p = kRecoveryP;
  s.x_names = numbered("x", kRecoveryP);
  s.z_names = {"time"};
  s.z_scale = kMaxTime;
  for (std::size_t i = 0; i < n_patients; ++i) {
    std::vector<double> xi;
    uniform_row(rng, kRecoveryP, xi);
    const std::size_t count = 1 + rng.poisson(3.0);
    for (double t : follow_up_times(count, rng)) {
      const double f = recovery_curve(xi, t);
      s.x.insert(s.x.end(), xi.begin(), xi.end());
      s.z.push_back(t);
      s.truth.push_back(f);
      s.y.push_back(f + kRecoveryNoise * rng.normal());
      s.group.push_back(static_cast<int>(i));
    }
    for (double t : kFollowUpGrid) s.grid.push_back({static_cast<int>(i), t, recovery_curve(xi, t)});
  }
  s.n = s.y.size();
  return s;
}

Simulation generate_friedman(std::size_t n, double sigma, std::size_t p_extra, std::uint64_t seed) {
  if (n < 1) throw ConfigError("friedman simulation needs at least one row");
  if (!(sigma >= 0.0)) throw ConfigError("noise level must be non-negative");
  Rng rng(seed);
  Simulation s;
  s.name = "friedman";
  s.n = n;
  s.p = 5 + p_extra;
  s.x_names = numbered("x", s.p);
  s.z_names = s.x_names;
  s.z_is_x = true;
  for (std::size_t i = 0; i < n; ++i) {
    uniform_row(rng, s.p, s.x);
    const double f = friedman(std::span<const double>(s.x).subspan(i * s.p, s.p));
    s.truth.push_back(f);
    s.y.push_back(f + sigma * rng.normal());
  }
  return s;
}

Simulation generate_binary(std::size_t n, std::uint64_t seed) {
  if (n < 1) throw ConfigError("binary simulation needs at least one row");
  Rng rng(seed);
  Simulation s;
  s.name = "binary";
  s.outcome = Outcome::kBinary;
  s.n = n;
  s.p = kRecoveryP;
  s.x_names = numbered("x", kRecoveryP);
  s.z_names = {"time"};
  s.z_scale = kMaxTime;
  for (std::size_t i = 0; i < n; ++i) {
    uniform_row(rng, kRecoveryP, s.x);
    const double t = rng.uniform(0.0, kMaxTime);
    const double prob = normal_cdf(recovery_curve(std::span<const double>(s.x).subspan(i * s.p, s.p), t) - 0.75);
    s.z.push_back(t);
    s.truth.push_back(prob);
    s.y.push_back(rng.bernoulli(prob) ? 1.0 : 0.0);
  }
  return s;
}

Simulation generate(std::string_view name, std::size_t n, std::uint64_t seed) {
  if (name == "recovery") return generate_recovery(n, seed);
  if (name == "friedman") return generate_friedman(n, 1.0, 0, seed);
  if (name == "binary") return generate_binary(n, seed);
  throw ConfigError(fmt::format("unknown data generator '{}'", name));
}

}  // namespace ridgebart::dgp
