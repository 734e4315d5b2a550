#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ridgebart/core.hpp"
#include "ridgebart/ensemble.hpp"
#include "ridgebart/tree.hpp"

// Data-parallel evaluation kernels. Each has an OpenMP version and a serial
// reference with identical per-row arithmetic, so both produce bitwise equal
// output for any thread count.
namespace ridgebart::kernels {

int max_threads();

/// out[i] = g(x_i, z_i; tree) for every row of the row-major tables.
void evaluate_tree(const RidgeTree& tree, Activation kind, std::span<const double> x, std::span<const double> z,
                   std::size_t p, std::size_t q, std::span<double> out);
void evaluate_tree_serial(const RidgeTree& tree, Activation kind, std::span<const double> x,
                          std::span<const double> z, std::size_t p, std::size_t q, std::span<double> out);

/// Row-major draws x rows matrix of y_center + sum of trees.
std::vector<double> evaluate_draws(std::span<const Ensemble> draws, std::span<const double> x,
                                   std::span<const double> z, std::size_t p, std::size_t q);
std::vector<double> evaluate_draws_serial(std::span<const Ensemble> draws, std::span<const double> x,
                                          std::span<const double> z, std::size_t p, std::size_t q);

/// Pointwise summaries over the draws (columns of a draws x rows matrix).
struct Summary {
  std::vector<double> mean;
  std::vector<double> lower;
  std::vector<double> upper;
};

/// Empirical quantiles use linear interpolation between order statistics.
Summary summarize(std::span<const double> matrix, std::size_t draws, std::size_t rows, double level);
Summary summarize_serial(std::span<const double> matrix, std::size_t draws, std::size_t rows, double level);

double quantile_sorted(std::span<const double> sorted, double prob);

}  // namespace ridgebart::kernels
