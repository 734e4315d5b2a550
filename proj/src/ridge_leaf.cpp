#include "ridgebart/ridge_leaf.hpp"

#include <numbers>

#include <boost/math/special_functions/gamma.hpp>

#include "ridgebart/errors.hpp"
#include "ridgebart/rng.hpp"

namespace ridgebart {

Eigen::MatrixXd sample_rotation(std::size_t q, Rng& rng) {
  const auto n = static_cast<Eigen::Index>(q);
  Eigen::MatrixXd g(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) g(i, j) = rng.normal();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q_mat = qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
  const Eigen::MatrixXd& r = qr.matrixQR();
  for (Eigen::Index j = 0; j < n; ++j)
    if (r(j, j) < 0.0) q_mat.col(j) *= -1.0;
  return q_mat;
}

LeafParams sample_inner_weights(const PriorConfig& config, std::size_t q, Rng& rng) {
  const auto d = static_cast<std::size_t>(config.basis_size());
  LeafParams leaf = LeafParams::zeros(q, d);
  if (config.activation == Activation::kConstant) return leaf;

  leaf.rho = rng.gamma(config.nu / 2.0, config.nu * config.lambda / 2.0);
  const double scale = 1.0 / std::sqrt(leaf.rho);
  const auto qi = static_cast<Eigen::Index>(q);

  Eigen::VectorXd sd = Eigen::VectorXd::Ones(qi);
  if (!config.omega_base_cov.empty()) {
    if (config.omega_base_cov.size() != q) throw ConfigError("omega base covariance has the wrong length");
    for (Eigen::Index k = 0; k < qi; ++k) sd[k] = std::sqrt(config.omega_base_cov[static_cast<std::size_t>(k)]);
  }
  // omega = rho^-1/2 Q V^1/2 xi has covariance Q V Q^T / rho.
  Eigen::MatrixXd transform = sd.asDiagonal();
  if (config.rotate_omega) transform = sample_rotation(q, rng) * transform;

  Eigen::VectorXd xi(qi);
  for (Eigen::Index col = 0; col < leaf.omega.cols(); ++col) {
    for (Eigen::Index k = 0; k < qi; ++k) xi[k] = rng.normal();
    leaf.omega.col(col) = scale * (transform * xi);
  }
  for (Eigen::Index col = 0; col < leaf.offsets.size(); ++col) {
    leaf.offsets[col] = config.activation == Activation::kCosine ? rng.uniform(0.0, 2.0 * std::numbers::pi)
                                                                 : rng.normal();
  }
  return leaf;
}

LeafParams sample_leaf_prior(const PriorConfig& config, std::size_t q, Rng& rng) {
  LeafParams leaf = sample_inner_weights(config, q, rng);
  for (Eigen::Index d = 0; d < leaf.beta.size(); ++d) leaf.beta[d] = config.tau * rng.normal();
  return leaf;
}

Eigen::MatrixXd build_basis(std::span<const double> z_rows, std::size_t q, const LeafParams& leaf,
                            Activation kind) {
  const std::size_t n = q == 0 ? 0 : z_rows.size() / q;
  const Eigen::Index d = kind == Activation::kConstant ? 1 : leaf.offsets.size();
  Eigen::MatrixXd phi(static_cast<Eigen::Index>(n), d);
  for (std::size_t i = 0; i < n; ++i) {
    std::span<const double> z = z_rows.subspan(i * q, q);
    for (Eigen::Index c = 0; c < d; ++c) phi(static_cast<Eigen::Index>(i), c) = ridge_feature(kind, leaf, z, c);
  }
  return phi;
}

void build_basis(const Dataset& data, std::span<const std::uint32_t> rows, const LeafParams& leaf,
                 Activation kind, Eigen::MatrixXd& phi) {
  const Eigen::Index d = kind == Activation::kConstant ? 1 : leaf.offsets.size();
  phi.resize(static_cast<Eigen::Index>(rows.size()), d);
  if (kind == Activation::kConstant) {
    phi.setOnes();
    return;
  }
  for (Eigen::Index c = 0; c < d; ++c) {
    const double* w = leaf.omega.col(c).data();
    const double b = leaf.offsets[c];
    double* out = phi.col(c).data();
    for (std::size_t r = 0; r < rows.size(); ++r) {
      const double* z = data.z.data() + static_cast<std::size_t>(rows[r]) * data.q;
      double t = b;
      for (std::size_t k = 0; k < data.q; ++k) t += w[k] * z[k];
      out[r] = activation(kind, t);
    }
  }
}

double leaf_eval(std::span<const double> x, std::span<const double> z, const RidgeTree& tree, Activation kind) {
  return ridge_output(kind, tree.leaf(tree.route(x)), z);
}

double default_tau(double y_min, double y_max, int num_trees, int num_ridge) {
  if (!(y_max > y_min)) throw ConfigError("outcome range is degenerate");
  return (y_max - y_min) / (4.0 * std::sqrt(static_cast<double>(num_trees) * num_ridge));
}

double gamma_cdf(double x, double shape, double rate) {
  if (x <= 0.0) return 0.0;
  return boost::math::gamma_p(shape, rate * x);
}

double solve_lambda(double nu, double threshold, double prob) {
  if (!(nu > 0.0) || !(threshold > 0.0) || !(prob > 0.0 && prob < 1.0))
    throw ConfigError("solve_lambda needs nu > 0, threshold > 0 and prob in (0,1)");
  // P(rho < threshold) = gamma_p(nu/2, nu*lambda*threshold/2) increases in lambda.
  auto cdf = [&](double lambda) { return gamma_cdf(threshold, nu / 2.0, nu * lambda / 2.0); };
  double lo = 1.0, hi = 1.0;
  while (cdf(lo) > prob) lo *= 0.5;
  while (cdf(hi) < prob) hi *= 2.0;
  while ((hi - lo) > 1e-12 * hi) {
    double mid = 0.5 * (lo + hi);
    (cdf(mid) < prob ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace ridgebart
