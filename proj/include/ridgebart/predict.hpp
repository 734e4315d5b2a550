#pragma once

#include <cstddef>
#include <vector>

#include "ridgebart/ensemble.hpp"
#include "ridgebart/kernels.hpp"
#include "ridgebart/preprocess.hpp"

namespace ridgebart {

struct Prediction {
  std::size_t draws = 0;
  std::size_t rows = 0;
  /// draws x rows, row-major. Probabilities for binary outcomes.
  std::vector<double> per_draw;
  kernels::Summary summary;
  double level = 0.95;
};

/// Per-draw y_center + sum of trees (passed through the normal CDF for
/// binary outcomes) and pointwise mean / equal-tailed interval at `level`.
/// Throws DimensionMismatchError when the inputs do not match the model.
Prediction predict(const PosteriorSamples& samples, const PredictionInputs& inputs, double level = 0.95);

double normal_cdf(double t);

/// Inputs taken straight from preprocessed data.
PredictionInputs inputs_from(const Dataset& data);

}  // namespace ridgebart
