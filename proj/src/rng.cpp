#include "ridgebart/rng.hpp"

#include <cmath>

namespace ridgebart {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t Rng::mix(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t state = seed;
  std::uint64_t a = splitmix64(state);
  state ^= stream * 0xD1B54A32D192ED03ULL;
  std::uint64_t b = splitmix64(state);
  return a ^ (b + 0x632BE59BD9B4E019ULL);
}

Rng::Rng(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t state = mix(seed, stream);
  std::seed_seq seq{static_cast<std::uint32_t>(splitmix64(state)),
                    static_cast<std::uint32_t>(splitmix64(state)),
                    static_cast<std::uint32_t>(splitmix64(state)),
                    static_cast<std::uint32_t>(splitmix64(state))};
  engine_.seed(seq);
}

double Rng::uniform() { return std::generate_canonical<double, 53>(engine_); }

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double Rng::normal() { return normal_(engine_); }

double Rng::gamma(double shape, double rate) {
  std::gamma_distribution<double> dist(shape, 1.0);
  return dist(engine_) / rate;
}

double Rng::inverse_gamma(double shape, double scale) {
  return scale / gamma(shape, 1.0);
}

double Rng::exponential(double rate) { return -std::log1p(-uniform()) / rate; }

std::uint64_t Rng::uniform_index(std::uint64_t n) {
  std::uniform_int_distribution<std::uint64_t> dist(0, n - 1);
  return dist(engine_);
}

std::uint64_t Rng::poisson(double mean) {
  std::poisson_distribution<std::uint64_t> dist(mean);
  return dist(engine_);
}

double Rng::truncated_normal_above(double lower) {
  if (lower <= 0.45) {
    // Plain rejection accepts with probability >= 1/3 here.
    for (;;) {
      double x = normal();
      if (x >= lower) return x;
    }
  }
  // Exponential proposal with the optimal rate (Robert 1995).
  const double rate = 0.5 * (lower + std::sqrt(lower * lower + 4.0));
  for (;;) {
    double x = lower + exponential(rate);
    double d = x - rate;
    if (uniform() <= std::exp(-0.5 * d * d)) return x;
  }
}

}  // namespace ridgebart
