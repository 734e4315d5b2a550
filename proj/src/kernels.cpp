#include "ridgebart/kernels.hpp"

#include <algorithm>
#include <cmath>

#include <omp.h>

#include "ridgebart/errors.hpp"
#include "ridgebart/ridge_leaf.hpp"

namespace ridgebart::kernels {

int max_threads() { return omp_get_max_threads(); }

namespace {

inline double tree_at(const RidgeTree& tree, Activation kind, const double* x, const double* z, std::size_t p,
                      std::size_t q) {
  return leaf_eval({x, p}, {z, q}, tree, kind);
}

inline double ensemble_at(const Ensemble& e, const double* x, const double* z, std::size_t p, std::size_t q) {
  double total = 0.0;
  for (const auto& tree : e.trees) total += tree_at(tree, e.activation, x, z, p, q);
  return e.y_center + total;
}

void check_rows(std::span<const double> x, std::span<const double> z, std::size_t p, std::size_t q,
                std::size_t& n) {
  if (p == 0 || q == 0 || x.size() % p != 0 || z.size() % q != 0 || x.size() / p != z.size() / q)
    throw DimensionMismatchError("x and z tables disagree on the number of rows");
  n = x.size() / p;
}

void summarize_column(std::span<const double> matrix, std::size_t draws, std::size_t rows, std::size_t j,
                      double level, std::vector<double>& scratch, Summary& out) {
  scratch.resize(draws);
  double sum = 0.0;
  for (std::size_t d = 0; d < draws; ++d) {
    scratch[d] = matrix[d * rows + j];
    sum += scratch[d];
  }
  std::sort(scratch.begin(), scratch.end());
  const double alpha = 0.5 * (1.0 - level);
  out.mean[j] = sum / static_cast<double>(draws);
  out.lower[j] = quantile_sorted(scratch, alpha);
  out.upper[j] = quantile_sorted(scratch, 1.0 - alpha);
}

}  // namespace

void evaluate_tree(const RidgeTree& tree, Activation kind, std::span<const double> x, std::span<const double> z,
                   std::size_t p, std::size_t q, std::span<double> out) {
  std::size_t n = 0;
  check_rows(x, z, p, q, n);
  const auto rows = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < rows; ++i) {
    const auto k = static_cast<std::size_t>(i);
    out[k] = tree_at(tree, kind, x.data() + k * p, z.data() + k * q, p, q);
  }
}

void evaluate_tree_serial(const RidgeTree& tree, Activation kind, std::span<const double> x,
                          std::span<const double> z, std::size_t p, std::size_t q, std::span<double> out) {
  std::size_t n = 0;
  check_rows(x, z, p, q, n);
  for (std::size_t i = 0; i < n; ++i) out[i] = tree_at(tree, kind, x.data() + i * p, z.data() + i * q, p, q);
}

std::vector<double> evaluate_draws(std::span<const Ensemble> draws, std::span<const double> x,
                                   std::span<const double> z, std::size_t p, std::size_t q) {
  std::size_t n = 0;
  check_rows(x, z, p, q, n);
  std::vector<double> out(draws.size() * n);
  const auto total = static_cast<std::ptrdiff_t>(draws.size() * n);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t c = 0; c < total; ++c) {
    const auto cell = static_cast<std::size_t>(c);
    const std::size_t d = cell / n, i = cell % n;
    out[cell] = ensemble_at(draws[d], x.data() + i * p, z.data() + i * q, p, q);
  }
  return out;
}

std::vector<double> evaluate_draws_serial(std::span<const Ensemble> draws, std::span<const double> x,
                                          std::span<const double> z, std::size_t p, std::size_t q) {
  std::size_t n = 0;
  check_rows(x, z, p, q, n);
  std::vector<double> out(draws.size() * n);
  for (std::size_t d = 0; d < draws.size(); ++d)
    for (std::size_t i = 0; i < n; ++i) out[d * n + i] = ensemble_at(draws[d], x.data() + i * p, z.data() + i * q, p, q);
  return out;
}

double quantile_sorted(std::span<const double> sorted, double prob) {
  if (sorted.empty()) return NAN;
  const double h = prob * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

Summary summarize(std::span<const double> matrix, std::size_t draws, std::size_t rows, double level) {
  Summary out{std::vector<double>(rows), std::vector<double>(rows), std::vector<double>(rows)};
  if (draws == 0) return out;
  const auto cols = static_cast<std::ptrdiff_t>(rows);
#pragma omp parallel
  {
    std::vector<double> scratch;
#pragma omp for schedule(static)
    for (std::ptrdiff_t j = 0; j < cols; ++j)
      summarize_column(matrix, draws, rows, static_cast<std::size_t>(j), level, scratch, out);
  }
  return out;
}

Summary summarize_serial(std::span<const double> matrix, std::size_t draws, std::size_t rows, double level) {
  Summary out{std::vector<double>(rows), std::vector<double>(rows), std::vector<double>(rows)};
  if (draws == 0) return out;
  std::vector<double> scratch;
  for (std::size_t j = 0; j < rows; ++j) summarize_column(matrix, draws, rows, j, level, scratch, out);
  return out;
}

}  // namespace ridgebart::kernels
