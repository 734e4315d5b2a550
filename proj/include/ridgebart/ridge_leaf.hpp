#pragma once

#include <cmath>
#include <span>

#include <Eigen/Dense>

#include "ridgebart/core.hpp"
#include "ridgebart/tree.hpp"

namespace ridgebart {

class Rng;

inline double activation(Activation kind, double t) {
  switch (kind) {
    case Activation::kCosine: return std::cos(t);
    case Activation::kTanh: return std::tanh(t);
    case Activation::kRelu: return t > 0.0 ? t : 0.0;
    case Activation::kConstant: return 1.0;
  }
  return 0.0;
}

/// Haar-distributed q x q orthogonal matrix: QR of a standard normal matrix
/// with the columns of Q sign-fixed by the diagonal of R.
Eigen::MatrixXd sample_rotation(std::size_t q, Rng& rng);

/// Draws (rho, omega, offsets) from the prior; beta is left at zero.
/// rho ~ Gamma(nu/2, rate nu*lambda/2); each column of omega ~ N(0, V/rho),
/// with V replaced by Q V Q^T for a fresh rotation when rotate_omega is set;
/// offsets ~ U(0, 2pi) for cosine and N(0, 1) otherwise. The constant
/// activation gets zeroed parameters without touching the rng.
LeafParams sample_inner_weights(const PriorConfig& config, std::size_t q, Rng& rng);

/// Inner weights from the prior plus beta ~ N(0, tau^2 I).
LeafParams sample_leaf_prior(const PriorConfig& config, std::size_t q, Rng& rng);

/// Value of phi(omega_d^T z + b_d) for a single row.
inline double ridge_feature(Activation kind, const LeafParams& leaf, std::span<const double> z, Eigen::Index d) {
  if (kind == Activation::kConstant) return 1.0;
  double t = leaf.offsets[d];
  const double* w = leaf.omega.col(d).data();
  for (std::size_t k = 0; k < z.size(); ++k) t += w[k] * z[k];
  return activation(kind, t);
}

/// Sum_d beta_d phi(omega_d^T z + b_d).
inline double ridge_output(Activation kind, const LeafParams& leaf, std::span<const double> z) {
  double s = 0.0;
  for (Eigen::Index d = 0; d < leaf.beta.size(); ++d) s += leaf.beta[d] * ridge_feature(kind, leaf, z, d);
  return s;
}

/// Basis matrix for the given rows of a row-major z table (n_rows x q).
Eigen::MatrixXd build_basis(std::span<const double> z_rows, std::size_t q, const LeafParams& leaf, Activation kind);

/// Same, but for a subset of rows of the full table.
void build_basis(const Dataset& data, std::span<const std::uint32_t> rows, const LeafParams& leaf,
                 Activation kind, Eigen::MatrixXd& phi);

/// g(x, z; tree): routes x and evaluates that leaf's ridge expansion.
double leaf_eval(std::span<const double> x, std::span<const double> z, const RidgeTree& tree, Activation kind);

/// (y_max - y_min) / (4 sqrt(M D)). Throws ConfigError unless y_max > y_min.
double default_tau(double y_min, double y_max, int num_trees, int num_ridge);

/// CDF at x of Gamma(shape, rate).
double gamma_cdf(double x, double shape, double rate);

/// lambda such that P(rho < threshold) = prob for rho ~ Gamma(nu/2, rate nu*lambda/2).
double solve_lambda(double nu, double threshold, double prob);

}  // namespace ridgebart
