#include "ridgebart/predict.hpp"

#include <cmath>

#include <fmt/format.h>

#include "ridgebart/errors.hpp"

namespace ridgebart {

double normal_cdf(double t) { return 0.5 * std::erfc(-t / std::sqrt(2.0)); }

PredictionInputs inputs_from(const Dataset& data) { return {data.n, data.p, data.q, data.x, data.z}; }

Prediction predict(const PosteriorSamples& samples, const PredictionInputs& inputs, double level) {
  if (!(level > 0.0 && level < 1.0)) throw ConfigError(fmt::format("interval level {} is not in (0, 1)", level));
  const std::size_t p = samples.transform.x_columns.size();
  const std::size_t q = samples.transform.z_columns.size();
  if (inputs.p != p || inputs.q != q || inputs.x.size() != inputs.n * p || inputs.z.size() != inputs.n * q)
    throw DimensionMismatchError(
        fmt::format("model expects {} x and {} z columns, inputs have {} and {}", p, q, inputs.p, inputs.q));

  Prediction out;
  out.level = level;
  out.draws = samples.draws.size();
  out.rows = inputs.n;
  out.per_draw = kernels::evaluate_draws(samples.draws, inputs.x, inputs.z, p, q);
  if (samples.outcome == Outcome::kBinary)
    for (double& v : out.per_draw) v = normal_cdf(v);
  out.summary = kernels::summarize(out.per_draw, out.draws, out.rows, level);
  return out;
}

}  // namespace ridgebart
