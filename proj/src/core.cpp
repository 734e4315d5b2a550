#include "ridgebart/core.hpp"

#include <cmath>
#include <fmt/format.h>

#include "ridgebart/errors.hpp"

namespace ridgebart {

std::string_view to_string(Activation a) {
  switch (a) {
    case Activation::kCosine: return "cosine";
    case Activation::kTanh: return "tanh";
    case Activation::kRelu: return "relu";
    case Activation::kConstant: return "constant";
  }
  return "unknown";
}

std::string_view to_string(Outcome o) {
  return o == Outcome::kGaussian ? "gaussian" : "binary";
}

Activation parse_activation(std::string_view name) {
  if (name == "cosine" || name == "cos") return Activation::kCosine;
  if (name == "tanh") return Activation::kTanh;
  if (name == "relu") return Activation::kRelu;
  if (name == "constant") return Activation::kConstant;
  throw ConfigError("unknown activation '" + std::string(name) + "'");
}

Outcome parse_outcome(std::string_view name) {
  if (name == "gaussian") return Outcome::kGaussian;
  if (name == "binary") return Outcome::kBinary;
  throw ConfigError("unknown outcome '" + std::string(name) + "'");
}

double Branching::split_probability(int depth) const {
  if (depth >= kMaxDepth) return 0.0;
  if (kind == Kind::kPower) return base * std::pow(1.0 + depth, -exponent);
  return std::pow(gamma, depth + 1);
}

void PriorConfig::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(std::string(name) + " must be positive");
  };
  if (num_trees < 1) throw ConfigError("number of trees must be positive");
  if (num_ridge < 1) throw ConfigError("number of ridge functions must be positive");
  positive(tau, "tau");
  positive(nu, "nu");
  positive(lambda, "lambda");
  positive(nu_sigma, "nu_sigma");
  positive(lambda_sigma, "lambda_sigma");
  if (branching.kind == Branching::Kind::kPower) {
    if (!(branching.base > 0.0 && branching.base < 1.0)) throw ConfigError("branching base must lie in (0,1)");
    if (!(branching.exponent >= 0.0)) throw ConfigError("branching exponent must be nonnegative");
  } else if (!(branching.gamma > 0.0 && branching.gamma < 1.0)) {
    throw ConfigError("branching gamma must lie in (0,1)");
  }
  for (double v : omega_base_cov) positive(v, "omega base covariance entries");
}

void Dataset::validate() const {
  if (n < 1 || p < 1 || q < 1) throw DataError("dataset needs n, p, q >= 1");
  if (x.size() != n * p || z.size() != n * q || y.size() != n)
    throw DimensionMismatchError("dataset arrays do not match n, p, q");
  if (variables.size() != p) throw DimensionMismatchError("variable info does not match p");
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < p; ++j) {
      double v = x[i * p + j];
      if (!std::isfinite(v)) throw NonFiniteValueError("non-finite covariate");
      if (variables.categorical(j)) {
        if (v != std::floor(v) || v < 0 || v >= variables.levels[j])
          throw DataError(fmt::format("categorical code out of range in column {}", j));
      } else if (v < 0.0 || v > 1.0) {
        throw DataError(fmt::format("covariate column {} outside [0,1]", j));
      }
    }
    for (std::size_t j = 0; j < q; ++j) {
      double v = z[i * q + j];
      if (!std::isfinite(v)) throw NonFiniteValueError("non-finite smoothing variable");
      if (v < 0.0 || v > 1.0) throw DataError(fmt::format("smoothing column {} outside [0,1]", j));
    }
    if (!std::isfinite(y[i])) throw NonFiniteValueError("non-finite outcome");
    if (outcome == Outcome::kBinary && y[i] != 0.0 && y[i] != 1.0)
      throw DataError("binary outcome must be 0 or 1");
  }
  for (int k : variables.levels)
    if (k == 1 || k < 0 || k > 64) throw DataError("categorical columns need between 2 and 64 levels");
}

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace ridgebart
