#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ridgebart {

enum class Activation { kCosine, kTanh, kRelu, kConstant };
enum class Outcome { kGaussian, kBinary };

std::string_view to_string(Activation a);
std::string_view to_string(Outcome o);
/// Throws ConfigError on unknown names.
Activation parse_activation(std::string_view name);
Outcome parse_outcome(std::string_view name);

/// Branching-process tree prior. The power form splits a depth-d node with
/// probability base * (1 + d)^-exponent; the geometric form with gamma^(d+1).
struct Branching {
  enum class Kind { kPower, kGeometric };
  Kind kind = Kind::kPower;
  double base = 0.95;
  double exponent = 2.0;
  double gamma = 0.25;

  static constexpr int kMaxDepth = 32;

  /// Zero at and beyond kMaxDepth.
  double split_probability(int depth) const;
};

struct PriorConfig {
  int num_trees = 50;
  int num_ridge = 1;
  Activation activation = Activation::kCosine;
  double tau = 1.0;
  double nu = 3.0;
  double lambda = 0.7886;
  double nu_sigma = 3.0;
  double lambda_sigma = 1.0;
  Branching branching;
  bool rotate_omega = false;
  /// Diagonal of the base covariance V of each inner direction. Empty means
  /// the identity.
  std::vector<double> omega_base_cov;

  /// Throws ConfigError when an invariant fails.
  void validate() const;
  /// Ridge functions per leaf actually used (1 for the constant activation).
  int basis_size() const { return activation == Activation::kConstant ? 1 : num_ridge; }
};

/// Per-column description of the split covariates.
struct VariableInfo {
  /// levels[j] == 0 for a continuous column, else the number of categories.
  std::vector<int> levels;

  std::size_t size() const { return levels.size(); }
  bool categorical(std::size_t j) const { return levels[j] > 0; }
};

/// Preprocessed training data. Matrices are row-major. Continuous entries
/// lie in [0,1]; categorical columns of x hold integer level codes.
struct Dataset {
  std::size_t n = 0;
  std::size_t p = 0;
  std::size_t q = 0;
  std::vector<double> x;
  std::vector<double> z;
  std::vector<double> y;
  Outcome outcome = Outcome::kGaussian;
  VariableInfo variables;

  std::span<const double> x_row(std::size_t i) const { return {x.data() + i * p, p}; }
  std::span<const double> z_row(std::size_t i) const { return {z.data() + i * q, q}; }

  /// Throws DataError when shapes or value ranges are invalid.
  void validate() const;
};

/// FNV-1a over a byte string, used for config hashes.
std::uint64_t fnv1a(std::string_view bytes);

}  // namespace ridgebart
