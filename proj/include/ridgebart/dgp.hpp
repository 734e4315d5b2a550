#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ridgebart/core.hpp"
#include "ridgebart/preprocess.hpp"

namespace ridgebart::dgp {

inline constexpr std::array<double, 9> kFollowUpGrid{1, 2, 4, 6, 8, 12, 16, 20, 24};
inline constexpr double kMaxTime = 24.0;
inline constexpr double kRecoveryNoise = 0.05;

double recovery_a(std::span<const double> x);
double recovery_b(std::span<const double> x);
double recovery_c(std::span<const double> x);
/// (1 - A(x)) (1 - B(x) exp(-z C(x))); only x1..x3 matter.
double recovery_curve(std::span<const double> x, double z);

/// sin(pi x1 x2) + 20 (x3 - 0.5)^2 + 10 x4 + 5 x5.
double friedman(std::span<const double> x);

/// A simulated data set in raw units together with its noise-free truth.
struct Simulation {
  std::string name;
  Outcome outcome = Outcome::kGaussian;
  std::size_t n = 0;
  std::size_t p = 0;
  /// Names of x columns; the z columns are either the x columns themselves
  /// (z_is_x) or separate named columns.
  std::vector<std::string> x_names;
  std::vector<std::string> z_names;
  bool z_is_x = false;
  std::vector<double> x;  // n x p
  std::vector<double> z;  // n x q, raw units; empty when z_is_x
  double z_scale = 1.0;   // z / z_scale lies in [0, 1]
  std::vector<double> y;
  /// f(x, z) for Gaussian outcomes, the success probability for binary ones.
  std::vector<double> truth;
  /// Patient of each row (recovery only).
  std::vector<int> group;

  /// Noise-free evaluation grid: for recovery, every patient at every
  /// follow-up time.
  struct GridPoint {
    int group;
    double z;
    double truth;
  };
  std::vector<GridPoint> grid;

  std::size_t q() const { return z_is_x ? p : z_names.size(); }

  /// Data set with z divided by z_scale (no data-dependent rescaling).
  Dataset dataset() const;
  /// CSV form: optional patient column, x columns, z columns, outcome y.
  Table table() const;
  Table truth_table() const;
  /// Grid rows in the same column layout as table() (y omitted, truth added).
  Table grid_table() const;
  Schema schema() const;
};

Simulation generate_recovery(std::size_t n_patients, std::uint64_t seed);
Simulation generate_friedman(std::size_t n, double sigma, std::size_t p_extra, std::uint64_t seed);
/// y ~ Bernoulli(Phi(f - 0.75)) over the recovery surface with times
/// uniform on [0, 24].
Simulation generate_binary(std::size_t n, std::uint64_t seed);

/// By name: recovery (n patients), friedman (unit noise, no extra columns)
/// or binary. Throws ConfigError for unknown names.
Simulation generate(std::string_view name, std::size_t n, std::uint64_t seed);

}  // namespace ridgebart::dgp
