#pragma once

#include <cstdint>
#include <random>

namespace ridgebart {

/// Per-chain random stream. Chain `stream` of a run seeded with `seed`
/// always produces the same sequence for a given build.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  /// Uniform on [0, 1).
  double uniform();
  double uniform(double lo, double hi);
  double normal();
  double normal(double mean, double sd) { return mean + sd * normal(); }
  /// Gamma with the given shape and RATE.
  double gamma(double shape, double rate);
  /// Inverse gamma with shape a and scale b (so 1/x ~ Gamma(a, rate b)).
  double inverse_gamma(double shape, double scale);
  double exponential(double rate);
  /// Uniform integer in [0, n).
  std::uint64_t uniform_index(std::uint64_t n);
  std::uint64_t poisson(double mean);
  bool bernoulli(double p) { return uniform() < p; }

  /// Standard normal conditioned on being >= lower.
  double truncated_normal_above(double lower);

  std::mt19937_64& engine() { return engine_; }

  /// Derive an independent child seed, e.g. for per-fold sub-runs.
  static std::uint64_t mix(std::uint64_t seed, std::uint64_t stream);

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace ridgebart
