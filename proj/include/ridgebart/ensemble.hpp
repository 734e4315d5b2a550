#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ridgebart/core.hpp"
#include "ridgebart/preprocess.hpp"
#include "ridgebart/tree.hpp"

namespace ridgebart {

struct Ensemble {
  std::vector<RidgeTree> trees;
  double sigma2 = 1.0;
  /// Added back to the tree sum at prediction time (mean of y, or the probit
  /// offset for binary outcomes).
  double y_center = 0.0;
  Activation activation = Activation::kCosine;

  /// Sum of the trees, in index order, excluding y_center.
  double evaluate(std::span<const double> x, std::span<const double> z) const;
  std::size_t total_leaves() const;

  friend bool operator==(const Ensemble&, const Ensemble&) = default;
};

struct PosteriorSamples {
  std::uint64_t seed = 0;
  int chains = 1;
  int iterations = 0;
  int burn_in = 0;
  int thin = 1;
  std::string config_hash;
  Outcome outcome = Outcome::kGaussian;
  PriorConfig config;
  TransformRecord transform;
  /// Pooled post-burn-in draws, chain 0 first.
  std::vector<Ensemble> draws;

  int draws_per_chain() const { return thin > 0 ? (iterations - burn_in) / thin : 0; }
  /// Throws InvariantViolationError when counts or draws are inconsistent.
  void validate() const;

  friend bool operator==(const PosteriorSamples& a, const PosteriorSamples& b);
};

/// Hex FNV-1a of the canonical JSON form of the configuration.
std::string config_hash(const PriorConfig& config, Outcome outcome);

}  // namespace ridgebart
