#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "helpers.hpp"
#include "ridgebart/errors.hpp"
#include "ridgebart/eval.hpp"
#include "ridgebart/ridge_leaf.hpp"
#include "ridgebart/sampler.hpp"

using namespace ridgebart;

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

SuffStats stats_for(const Eigen::MatrixXd& phi, const Eigen::VectorXd& r, double sigma2, double tau) {
  return leaf_suffstats(phi, {r.data(), static_cast<std::size_t>(r.size())}, sigma2, tau);
}

PriorConfig small_config(Activation kind, int trees, int ridge) {
  PriorConfig c;
  c.activation = kind;
  c.num_trees = trees;
  c.num_ridge = ridge;
  c.tau = 0.4;
  c.lambda_sigma = 0.5;
  return c;
}

// Log target of one tree given a partial residual, evaluated from scratch:
// tree prior plus the marginal likelihood of every leaf.
double full_log_target(const RidgeTree& tree, const Dataset& data, const std::vector<double>& r, double sigma2,
                       const PriorConfig& config) {
  double total = log_tree_prior(tree, config.branching, data.variables);
  for (NodeId id : tree.leaves()) {
    std::vector<double> z_rows, r_rows;
    for (std::size_t i = 0; i < data.n; ++i) {
      if (tree.route(data.x_row(i)) != id) continue;
      auto z = data.z_row(i);
      z_rows.insert(z_rows.end(), z.begin(), z.end());
      r_rows.push_back(r[i]);
    }
    Eigen::MatrixXd phi = build_basis(z_rows, data.q, tree.leaf(id), config.activation);
    if (phi.rows() == 0) phi.resize(0, config.basis_size());
    total += log_marginal_leaf(leaf_suffstats(phi, r_rows, sigma2, config.tau), config.tau);
  }
  return total;
}

RidgeTree apply(const RidgeTree& tree, const Proposal& p) {
  RidgeTree out = tree;
  switch (p.kind) {
    case MoveKind::kGrow:
      out.grow(p.node, p.rule, p.fresh.at(left_child(p.node)), p.fresh.at(right_child(p.node)));
      break;
    case MoveKind::kPrune:
      out.prune(p.node, p.fresh.at(p.node));
      break;
    case MoveKind::kChange:
      for (const auto& [id, leaf] : p.fresh) out.leaf(id) = leaf;
      break;
  }
  return out;
}

// Independent evaluation of the Metropolis-Hastings log ratio.
double brute_force_ratio(const ChainState& state, std::size_t m, const Proposal& p) {
  const RidgeTree& before = state.ensemble().trees[m];
  const RidgeTree after = apply(before, p);
  const auto r = state.partial_residual(m);
  const Dataset& data = state.data();
  const double s2 = state.ensemble().sigma2;
  double delta = full_log_target(after, data, r, s2, state.config()) -
                 full_log_target(before, data, r, s2, state.config());
  if (p.kind == MoveKind::kGrow) {
    const double lrule = log_rule_probability(p.rule, cell_bounds(before, p.node, data.variables), data.variables);
    delta += std::log(MoveProbabilities::for_tree(after).prune) - std::log(after.no_grandchildren().size());
    delta -= std::log(MoveProbabilities::for_tree(before).grow) - std::log(before.num_leaves()) + lrule;
  } else if (p.kind == MoveKind::kPrune) {
    const double lrule =
        log_rule_probability(before.node(p.node).rule, cell_bounds(before, p.node, data.variables), data.variables);
    delta += std::log(MoveProbabilities::for_tree(after).grow) - std::log(after.num_leaves()) + lrule;
    delta -= std::log(MoveProbabilities::for_tree(before).prune) - std::log(before.no_grandchildren().size());
  }
  return delta;
}

Proposal sample_kind(ChainState& state, std::size_t m, MoveKind kind) {
  for (int attempt = 0; attempt < 1000; ++attempt) {
    auto p = state.sample_proposal(m);
    if (p && p->kind == kind) return *p;
  }
  throw std::runtime_error("could not sample the requested move");
}

}  // namespace

// --- leaf algebra ---------------------------------------------------------------

TEST(LeafAlgebra, EmptyLeafIsPriorOnly) {
  SuffStats s = stats_for(Eigen::MatrixXd(0, 1), Eigen::VectorXd(0), 1.0, 1.0);
  EXPECT_EQ(s.precision(0, 0), 1.0);
  EXPECT_EQ(s.theta(0), 0.0);
  EXPECT_EQ(s.n_leaf, 0u);
  for (double tau : {0.1, 1.0, 7.0})
    for (int d : {1, 3}) {
      SuffStats e = stats_for(Eigen::MatrixXd(0, d), Eigen::VectorXd(0), 2.0, tau);
      EXPECT_NEAR(log_marginal_leaf(e, tau), 0.0, 1e-12);
    }
}

TEST(LeafAlgebra, ConstantBasisGivesScalarFormula) {
  Eigen::MatrixXd phi = Eigen::MatrixXd::Ones(4, 1);
  Eigen::VectorXd r(4);
  r << 0.5, -1.0, 2.0, 0.25;
  SuffStats s = stats_for(phi, r, 1.0, 1.0);
  EXPECT_DOUBLE_EQ(s.precision(0, 0), 5.0);
  EXPECT_DOUBLE_EQ(s.theta(0), r.sum());
}

TEST(LeafAlgebra, OneByOneExample) {
  Eigen::MatrixXd phi = Eigen::MatrixXd::Ones(1, 1);
  Eigen::VectorXd r = Eigen::VectorXd::Ones(1);
  SuffStats s = stats_for(phi, r, 1.0, 1.0);
  EXPECT_DOUBLE_EQ(s.precision(0, 0), 2.0);
  EXPECT_DOUBLE_EQ(s.theta(0), 1.0);
  const double lm = log_marginal_leaf(s, 1.0);
  EXPECT_NEAR(lm, -0.5 * std::log(2.0) + 0.25, 1e-15);
  EXPECT_NEAR(lm, -0.09657359, 1e-8);
  const double base = -0.5 * std::log(2.0 * std::numbers::pi) - 0.5;
  EXPECT_NEAR(lm + base, std::log(0.21970), 1e-4);
  EXPECT_NEAR(lm + base, eval::marginal_oracle(phi, r, 1.0, 1.0), 1e-12);
}

TEST(LeafAlgebra, OracleEquivalenceOnRandomLeaves) {
  Rng rng(31);
  for (int k = 0; k < 200; ++k) {
    const auto n = static_cast<Eigen::Index>(rng.uniform_index(5));
    const auto d = static_cast<Eigen::Index>(1 + rng.uniform_index(2));
    Eigen::MatrixXd phi(n, d);
    Eigen::VectorXd r(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      r[i] = rng.normal(0.0, 2.0);
      for (Eigen::Index j = 0; j < d; ++j) phi(i, j) = rng.normal();
    }
    const double sigma2 = rng.uniform(0.1, 3.0), tau = rng.uniform(0.1, 3.0);
    const double lm = log_marginal_leaf(stats_for(phi, r, sigma2, tau), tau);
    const double base = -0.5 * n * std::log(2.0 * std::numbers::pi * sigma2) - 0.5 * r.squaredNorm() / sigma2;
    EXPECT_NEAR(lm + base, eval::marginal_oracle(phi, r, sigma2, tau), 1e-8);
  }
}

TEST(LeafAlgebra, PrecisionEigenvaluesBoundedByPrior) {
  Rng rng(37);
  for (int k = 0; k < 50; ++k) {
    Eigen::MatrixXd phi(6, 3);
    for (Eigen::Index i = 0; i < phi.size(); ++i) phi.data()[i] = rng.normal();
    const double tau = rng.uniform(0.2, 2.0);
    SuffStats s = stats_for(phi, Eigen::VectorXd::Zero(6), rng.uniform(0.2, 2.0), tau);
    EXPECT_TRUE(s.precision.isApprox(s.precision.transpose(), 1e-15));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(s.precision);
    EXPECT_GE(eig.eigenvalues().minCoeff(), 1.0 / (tau * tau) - 1e-9);
  }
}

TEST(LeafAlgebra, SingularPrecisionRaisesNumericalError) {
  SuffStats s;
  s.precision = Eigen::MatrixXd::Zero(2, 2);
  s.precision(0, 0) = -1.0;
  s.theta = Eigen::VectorXd::Zero(2);
  EXPECT_THROW(LeafPosterior{s}, NumericalError);
}

TEST(LeafAlgebra, BetaDrawMoments) {
  Rng rng(41);
  Eigen::MatrixXd phi = Eigen::MatrixXd::Ones(1, 1);
  Eigen::VectorXd r = Eigen::VectorXd::Ones(1);
  SuffStats s = stats_for(phi, r, 1.0, 1.0);  // P = 2, Theta = 1
  const int draws = 100000;
  double sum = 0, sq = 0;
  for (int k = 0; k < draws; ++k) {
    const double b = draw_beta(s, rng)[0];
    sum += b;
    sq += b * b;
  }
  const double mean = sum / draws, var = sq / draws - mean * mean;
  EXPECT_NEAR(mean, 0.5, 3.0 * std::sqrt(0.5 / draws));
  EXPECT_NEAR(var, 0.5, 3.0 * 0.5 * std::sqrt(2.0 / draws));
}

TEST(LeafAlgebra, BetaDrawConcentratesWithTinyTau) {
  Rng rng(43);
  SuffStats s = stats_for(Eigen::MatrixXd::Ones(3, 1), Eigen::VectorXd::Zero(3), 1.0, 1e-3);
  const int draws = 10000;
  double sum = 0;
  for (int k = 0; k < draws; ++k) sum += draw_beta(s, rng)[0];
  const double sd = 1.0 / std::sqrt(s.precision(0, 0));
  EXPECT_NEAR(sum / draws, 0.0, 3.0 * sd / std::sqrt(draws));
}

TEST(LeafAlgebra, BetaDrawCovarianceInTwoDimensions) {
  Rng rng(47);
  Eigen::MatrixXd phi(3, 2);
  phi << 1, 0.5, -0.3, 1, 0.2, 0.2;
  Eigen::VectorXd r(3);
  r << 1, -1, 0.5;
  SuffStats s = stats_for(phi, r, 0.7, 1.3);
  const Eigen::MatrixXd cov = s.precision.inverse();
  const Eigen::VectorXd mean = s.precision.ldlt().solve(s.theta);
  const int draws = 100000;
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(2);
  Eigen::MatrixXd outer = Eigen::MatrixXd::Zero(2, 2);
  for (int k = 0; k < draws; ++k) {
    Eigen::VectorXd b = draw_beta(s, rng);
    sum += b;
    outer += (b - mean) * (b - mean).transpose();
  }
  for (int j = 0; j < 2; ++j) EXPECT_NEAR(sum[j] / draws, mean[j], 4.0 * std::sqrt(cov(j, j) / draws));
  EXPECT_TRUE(((outer / draws) - cov).cwiseAbs().maxCoeff() < 0.02 * cov.cwiseAbs().maxCoeff());
}

// --- latent and variance updates -----------------------------------------------

TEST(Latent, HalfNormalMean) {
  Rng rng(53);
  const int draws = 100000;
  double sum = 0, sq = 0;
  for (int k = 0; k < draws; ++k) {
    const double v = draw_latent(0.0, true, rng);
    ASSERT_GT(v, 0.0);
    sum += v;
    sq += v * v;
  }
  const double mean = sum / draws, sd = std::sqrt(sq / draws - mean * mean);
  EXPECT_NEAR(mean, std::sqrt(2.0 / std::numbers::pi), 3.0 * sd / std::sqrt(draws));
}

TEST(Latent, TruncationInactiveFarFromZero) {
  Rng rng(59);
  double sum = 0;
  for (int k = 0; k < 10000; ++k) sum += draw_latent(10.0, true, rng);
  EXPECT_NEAR(sum / 10000, 10.0, 0.05);
}

TEST(Latent, NegativeLabelsStayNonPositive) {
  Rng rng(61);
  for (double mean : {-3.0, 0.0, 0.5, 4.0, 9.0})
    for (int k = 0; k < 2000; ++k) EXPECT_LE(draw_latent(mean, false, rng), 0.0);
  for (double mean : {-9.0, -4.0, 0.0})
    for (int k = 0; k < 2000; ++k) EXPECT_GT(draw_latent(mean, true, rng), 0.0);
}

TEST(Sigma2, EmptyDataReturnsPrior) {
  Rng rng(67);
  const int draws = 200000;
  double sum = 0;
  for (int k = 0; k < draws; ++k) sum += draw_sigma2(10.0, 2.0, 0, 0.0, rng);
  // InverseGamma(5, 10) has mean 10 / 4.
  EXPECT_NEAR(sum / draws, 2.5, 3.0 * (2.5 / std::sqrt(3.0)) / std::sqrt(draws));
}

TEST(Sigma2, PosteriorMeanMatchesClosedForm) {
  Rng rng(71);
  const double shape = (3.0 + 100.0) / 2.0, scale = (3.0 * 1.0 + 100.0) / 2.0;
  const double mean = scale / (shape - 1.0), sd = mean / std::sqrt(shape - 2.0);
  const int draws = 100000;
  double sum = 0;
  for (int k = 0; k < draws; ++k) sum += draw_sigma2(3.0, 1.0, 100, 100.0, rng);
  EXPECT_NEAR(sum / draws, mean, 3.0 * sd / std::sqrt(draws));
}

TEST(Sigma2, SmallSseConcentratesNearZero) {
  Rng rng(73);
  const std::size_t n = 100000;
  double worst_small = 0, best_large = 1e9;
  for (int k = 0; k < 200; ++k) {
    worst_small = std::max(worst_small, draw_sigma2(3.0, 1.0, n, 1e-6, rng));
    best_large = std::min(best_large, draw_sigma2(3.0, 1.0, n, static_cast<double>(n), rng));
  }
  EXPECT_LT(worst_small, 1e-3);
  EXPECT_LT(worst_small, best_large);
}

TEST(Sigma2, CalibrationPutsNinetyPercentBelowVariance) {
  const double nu = 3.0, var = 2.7;
  const double lambda = calibrate_lambda_sigma(nu, var, 0.9);
  // sigma2 < var  <=>  Gamma(nu/2, rate nu lambda / 2) > 1 / var.
  EXPECT_NEAR(1.0 - gamma_cdf(1.0 / var, nu / 2.0, nu * lambda / 2.0), 0.9, 1e-10);
}

TEST(Moves, ProbabilitiesDependOnTreeSize) {
  RidgeTree stump;
  auto p = MoveProbabilities::for_tree(stump);
  EXPECT_DOUBLE_EQ(p.grow, 0.8);
  EXPECT_DOUBLE_EQ(p.prune, 0.0);
  EXPECT_DOUBLE_EQ(p.change, 0.2);
  DecisionRule r;
  stump.grow(kRootId, r, {}, {});
  p = MoveProbabilities::for_tree(stump);
  EXPECT_DOUBLE_EQ(p.grow, 0.4);
  EXPECT_DOUBLE_EQ(p.prune, 0.4);
}

// --- chain state ------------------------------------------------------------------

TEST(ChainState, ResidualIsTargetMinusFitsAfterUpdate) {
  Dataset d = rbtest::random_dataset(5, 1, 1, 2);
  ChainState s = ChainState::initialize(d, small_config(Activation::kConstant, 1, 1), 0.0, Rng(1));
  for (int k = 0; k < 20; ++k) {
    s.update_tree(0);
    for (std::size_t i = 0; i < d.n; ++i) EXPECT_NEAR(s.residual()[i], d.y[i] - s.fits(0)[i], 1e-12);
  }
}

TEST(ChainState, ResidualStaysSynchronizedOverSweeps) {
  Dataset d = rbtest::random_dataset(60, 3, 2, 3);
  for (Activation kind : {Activation::kCosine, Activation::kRelu, Activation::kTanh, Activation::kConstant}) {
    ChainState s = ChainState::initialize(d, small_config(kind, 8, 2), 0.0, Rng(2));
    for (int it = 0; it < 30; ++it) {
      for (std::size_t m = 0; m < 8; ++m) {
        s.update_tree(m);
        ASSERT_LT(s.residual_drift(), 1e-9);
      }
      s.update_sigma2();
    }
    // The cached fits agree with direct evaluation of each tree.
    for (std::size_t m = 0; m < 8; ++m)
      for (std::size_t i = 0; i < d.n; ++i)
        EXPECT_NEAR(s.fits(m)[i], leaf_eval(d.x_row(i), d.z_row(i), s.ensemble().trees[m], kind), 1e-12);
  }
}

TEST(ChainState, IdenticalChangeProposalHasZeroRatio) {
  Dataset d = rbtest::random_dataset(40, 2, 2, 4);
  ChainState s = ChainState::initialize(d, small_config(Activation::kCosine, 3, 2), 0.0, Rng(3));
  for (int it = 0; it < 10; ++it) s.sweep();
  for (std::size_t m = 0; m < 3; ++m) {
    Proposal p;
    p.kind = MoveKind::kChange;
    for (NodeId id : s.ensemble().trees[m].leaves()) p.fresh.emplace(id, s.ensemble().trees[m].leaf(id));
    EXPECT_EQ(s.proposal_log_ratio(m, p), 0.0);
    // Accepted whatever the uniform.
    EXPECT_TRUE(s.update_tree_with(m, p, std::log(1.0 - 1e-16)));
  }
}

TEST(ChainState, GrowOfEmptyLeafHasOnlyPriorAndProposalTerms) {
  Dataset d = rbtest::random_dataset(30, 1, 1, 5);
  PriorConfig config = small_config(Activation::kCosine, 1, 1);
  Ensemble e;
  e.sigma2 = 1.0;
  Rng rng(4);
  DecisionRule tiny;
  tiny.cutpoint = 1e-9;  // leaves node 2 without data
  RidgeTree t(sample_inner_weights(config, 1, rng));
  t.grow(kRootId, tiny, sample_inner_weights(config, 1, rng), sample_inner_weights(config, 1, rng));
  e.trees.push_back(t);
  ChainState s(d, config, e, Rng(5));

  Proposal p;
  p.kind = MoveKind::kGrow;
  p.node = 2;
  p.rule.cutpoint = 0.5e-9;
  p.fresh.emplace(4, sample_inner_weights(config, 1, rng));
  p.fresh.emplace(5, sample_inner_weights(config, 1, rng));
  const Branching& br = config.branching;
  const double lrule = -std::log(1e-9);
  const double expected = (std::log(br.split_probability(1)) + 2.0 * std::log1p(-br.split_probability(2)) + lrule -
                           std::log1p(-br.split_probability(1))) +
                          (std::log(0.4) - std::log(1.0)) - (std::log(0.4) - std::log(2.0) + lrule);
  EXPECT_NEAR(s.proposal_log_ratio(0, p), expected, 1e-12);
}

TEST(ChainState, AlwaysRejectKeepsStructureButRedrawsBeta) {
  Dataset d = rbtest::random_dataset(40, 2, 1, 6);
  ChainState s = ChainState::initialize(d, small_config(Activation::kTanh, 1, 1), 0.0, Rng(6));
  for (int it = 0; it < 5; ++it) s.sweep();
  for (int k = 0; k < 2; ++k) {
    const RidgeTree before = s.ensemble().trees[0];
    auto p = s.sample_proposal(0);
    ASSERT_TRUE(p.has_value());
    EXPECT_FALSE(s.update_tree_with(0, *p, std::numeric_limits<double>::infinity()));
    const RidgeTree& after = s.ensemble().trees[0];
    EXPECT_TRUE(after.same_structure(before));
    for (NodeId id : after.leaves()) {
      EXPECT_EQ(after.leaf(id).omega, before.leaf(id).omega);
      EXPECT_EQ(after.leaf(id).rho, before.leaf(id).rho);
      EXPECT_NE(after.leaf(id).beta, before.leaf(id).beta);
    }
  }
}

TEST(ChainState, LocalRatioMatchesFullRecomputation) {
  for (Activation kind : {Activation::kCosine, Activation::kRelu, Activation::kConstant}) {
    Dataset d = rbtest::random_dataset(50, 3, 2, 7);
    d.variables.levels[2] = 3;
    for (std::size_t i = 0; i < d.n; ++i) d.x[i * 3 + 2] = static_cast<double>(i % 3);
    ChainState s = ChainState::initialize(d, small_config(kind, 4, 2), 0.0, Rng(8));
    for (int it = 0; it < 40; ++it) {
      s.sweep();
      for (std::size_t m = 0; m < 4; ++m) {
        auto p = s.sample_proposal(m);
        if (!p) continue;
        const double local = s.proposal_log_ratio(m, *p);
        const double full = brute_force_ratio(s, m, *p);
        EXPECT_NEAR(local, full, 1e-8 * std::max(1.0, std::abs(full)));
      }
    }
  }
}

TEST(ChainState, GrowPruneReciprocity) {
  Dataset d = rbtest::random_dataset(40, 2, 2, 9);
  ChainState s = ChainState::initialize(d, small_config(Activation::kCosine, 2, 1), 0.0, Rng(10));
  int checked = 0;
  for (int it = 0; it < 300; ++it) {
    s.sweep();
    const std::size_t m = static_cast<std::size_t>(it % 2);
    const RidgeTree original = s.ensemble().trees[m];
    Proposal grow = sample_kind(s, m, MoveKind::kGrow);
    const double forward = s.proposal_log_ratio(m, grow);
    if (!std::isfinite(forward)) continue;
    const LeafParams old_leaf = original.leaf(grow.node);
    ASSERT_TRUE(s.update_tree_with(m, grow, kNegInf));

    Proposal prune;
    prune.kind = MoveKind::kPrune;
    prune.node = grow.node;
    prune.fresh.emplace(grow.node, old_leaf);
    const double backward = s.proposal_log_ratio(m, prune);
    EXPECT_NEAR(forward + backward, 0.0, 1e-9 * std::max(1.0, std::abs(forward)));
    ASSERT_TRUE(s.update_tree_with(m, prune, kNegInf));
    EXPECT_TRUE(s.ensemble().trees[m].same_structure(original));
    ++checked;
  }
  EXPECT_GT(checked, 250);
}

TEST(ChainState, BinaryLatentsRespectLabels) {
  Dataset d = rbtest::random_dataset(50, 2, 1, 11);
  d.outcome = Outcome::kBinary;
  for (std::size_t i = 0; i < d.n; ++i) d.y[i] = d.x[i * 2] > 0.5 ? 1.0 : 0.0;
  const double offset = 0.2;
  ChainState s = ChainState::initialize(d, small_config(Activation::kCosine, 5, 1), offset, Rng(12));
  for (int it = 0; it < 20; ++it) {
    s.sweep();
    EXPECT_EQ(s.ensemble().sigma2, 1.0);
    for (std::size_t i = 0; i < d.n; ++i) {
      const double latent = s.target()[i] + offset;
      if (d.y[i] == 1.0) {
        EXPECT_GT(latent, 0.0);
      } else {
        EXPECT_LE(latent, 0.0);
      }
    }
    EXPECT_LT(s.residual_drift(), 1e-9);
  }
}

// --- chains -------------------------------------------------------------------------

namespace {

TransformRecord identity_transform(std::size_t p, std::size_t q) {
  TransformRecord tr;
  for (std::size_t j = 0; j < p; ++j) tr.x_columns.push_back({"x" + std::to_string(j), false, 0, 1, {}});
  for (std::size_t j = 0; j < q; ++j) tr.z_columns.push_back({"z" + std::to_string(j), false, 0, 1, {}});
  return tr;
}

}  // namespace

TEST(Chains, DrawCountFollowsThinning) {
  Dataset d = rbtest::random_dataset(20, 1, 1, 13);
  McmcSettings st;
  st.iterations = 57;
  st.burn_in = 20;
  st.thin = 5;
  st.chains = 3;
  PosteriorSamples s = fit(d, identity_transform(1, 1), small_config(Activation::kCosine, 3, 1), st);
  EXPECT_EQ(s.draws.size(), 3u * 7u);
  EXPECT_EQ(s.draws_per_chain(), 7);
  EXPECT_NO_THROW(s.validate());
  st.iterations = st.burn_in;
  EXPECT_TRUE(fit(d, identity_transform(1, 1), small_config(Activation::kCosine, 3, 1), st).draws.empty());
}

TEST(Chains, SeedDeterminesEverything) {
  Dataset d = rbtest::random_dataset(30, 2, 1, 14);
  McmcSettings st;
  st.iterations = 40;
  st.burn_in = 10;
  st.thin = 3;
  st.chains = 3;
  st.seed = 99;
  auto config = small_config(Activation::kRelu, 4, 2);
  PosteriorSamples a = fit(d, identity_transform(2, 1), config, st);
  st.jobs = 1;
  PosteriorSamples b = fit(d, identity_transform(2, 1), config, st);
  EXPECT_TRUE(a == b);
  st.seed = 100;
  PosteriorSamples c = fit(d, identity_transform(2, 1), config, st);
  EXPECT_FALSE(a == c);
  // Chains are distinct streams.
  EXPECT_FALSE(a.draws[0] == a.draws[static_cast<std::size_t>(a.draws_per_chain())]);
}

TEST(Chains, DiagnosticsCoverEveryIteration) {
  Dataset d = rbtest::random_dataset(30, 2, 1, 15);
  McmcSettings st;
  st.iterations = 25;
  st.burn_in = 5;
  st.thin = 1;
  st.chains = 2;
  std::vector<IterationDiagnostics> diags;
  fit(d, identity_transform(2, 1), small_config(Activation::kCosine, 4, 1), st, &diags);
  ASSERT_EQ(diags.size(), 50u);
  EXPECT_EQ(diags[0].chain, 0);
  EXPECT_EQ(diags[25].chain, 1);
  for (const auto& r : diags) {
    EXPECT_EQ(r.moves.proposed[0] + r.moves.proposed[1] + r.moves.proposed[2], 4u);
    EXPECT_GT(r.sigma2, 0.0);
    EXPECT_TRUE(std::isfinite(r.log_likelihood));
  }
}

TEST(Chains, RejectsBadSettings) {
  Dataset d = rbtest::random_dataset(10, 1, 1, 16);
  McmcSettings st;
  st.iterations = 5;
  st.burn_in = 10;
  EXPECT_THROW(fit(d, identity_transform(1, 1), small_config(Activation::kCosine, 2, 1), st), ConfigError);
}

TEST(Chains, PriorEnsembleDrawIsValid) {
  Rng rng(17);
  PriorConfig c = small_config(Activation::kCosine, 5, 3);
  for (int k = 0; k < 50; ++k) {
    Ensemble e = sample_ensemble_prior(c, rbtest::continuous(2), 2, rng);
    EXPECT_EQ(e.trees.size(), 5u);
    EXPECT_GT(e.sigma2, 0.0);
    for (const auto& t : e.trees)
      for (NodeId id : t.leaves()) EXPECT_EQ(t.leaf(id).beta.size(), 3);
  }
}
