#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "ridgebart/core.hpp"
#include "ridgebart/ensemble.hpp"
#include "ridgebart/rng.hpp"
#include "ridgebart/tree.hpp"

namespace ridgebart {

// --- conjugate leaf algebra ---------------------------------------------------

struct SuffStats {
  Eigen::MatrixXd precision;  // P = Phi^T Phi / sigma2 + I / tau^2
  Eigen::VectorXd theta;      // Phi^T r / sigma2
  std::size_t n_leaf = 0;
};

SuffStats leaf_suffstats(const Eigen::MatrixXd& phi, std::span<const double> r, double sigma2, double tau);

/// Cholesky factor of a leaf precision. Adds 1e-12 to the diagonal once if
/// the first factorization fails; throws NumericalError if that fails too.
class LeafPosterior {
 public:
  explicit LeafPosterior(const SuffStats& stats);

  /// -D log tau - 1/2 log|P| + 1/2 Theta^T P^-1 Theta.
  double log_marginal(double tau) const;
  /// Draw from N(P^-1 Theta, P^-1).
  Eigen::VectorXd draw_beta(Rng& rng) const;
  Eigen::VectorXd mean() const;
  bool jittered() const { return jittered_; }

 private:
  Eigen::LLT<Eigen::MatrixXd> llt_;
  Eigen::VectorXd theta_;
  bool jittered_ = false;
};

double log_marginal_leaf(const SuffStats& stats, double tau);
Eigen::VectorXd draw_beta(const SuffStats& stats, Rng& rng);

/// Draw from N(mean, 1) truncated to (0, inf) when `positive`, else (-inf, 0].
double draw_latent(double mean, bool positive, Rng& rng);

/// InverseGamma((nu_sigma + n)/2, scale (nu_sigma lambda_sigma + sse)/2).
double draw_sigma2(double nu_sigma, double lambda_sigma, std::size_t n, double sse, Rng& rng);

/// lambda_sigma such that P(sigma2 < variance) = quantile under the
/// InverseGamma(nu_sigma/2, nu_sigma lambda_sigma/2) prior.
double calibrate_lambda_sigma(double nu_sigma, double variance, double quantile = 0.9);

/// Fills tau from the outcome range (a fixed (-3, 3) probit range for binary
/// outcomes) and lambda_sigma from the outcome variance.
void calibrate_prior(PriorConfig& config, const Dataset& data, double y_min, double y_max);

// --- tree moves ----------------------------------------------------------------

enum class MoveKind { kGrow = 0, kPrune = 1, kChange = 2 };

struct MoveProbabilities {
  double grow = 0.4;
  double prune = 0.4;
  double change = 0.2;

  /// Single-leaf trees cannot be pruned; their prune mass goes to grow.
  static MoveProbabilities for_tree(const RidgeTree& tree);
};

/// A fully specified proposal: the structural change plus fresh inner
/// weights for every leaf it creates (grow: both children; prune: the merged
/// node; change: every leaf).
struct Proposal {
  MoveKind kind = MoveKind::kChange;
  NodeId node = kRootId;
  DecisionRule rule;
  std::map<NodeId, LeafParams> fresh;
};

struct MoveCounts {
  std::array<std::uint64_t, 3> proposed{};
  std::array<std::uint64_t, 3> accepted{};
};

struct IterationDiagnostics {
  int chain = 0;
  int iteration = 0;
  double sigma2 = 0.0;
  double log_likelihood = 0.0;
  MoveCounts moves;
  std::size_t leaves = 0;
  std::uint64_t jitter_events = 0;
};

/// Mutable sampler state of one chain: the ensemble, the n x M cache of
/// per-tree fits, the residual target - sum of fits, and the rows reaching
/// each leaf of each tree.
class ChainState {
 public:
  ChainState(const Dataset& data, const PriorConfig& config, Ensemble initial, Rng rng);

  /// Single-leaf trees with inner weights from the prior and beta = 0;
  /// sigma2 = Var(y) for Gaussian outcomes, 1 for binary ones (whose latents
  /// are drawn once given f = 0).
  static ChainState initialize(const Dataset& data, const PriorConfig& config, double y_center, Rng rng);

  const Ensemble& ensemble() const { return ensemble_; }
  const Dataset& data() const { return *data_; }
  const PriorConfig& config() const { return config_; }
  std::span<const double> residual() const { return residual_; }
  std::span<const double> fits(std::size_t m) const { return fits_[m]; }
  /// Gaussian: y. Binary: latent - y_center.
  std::span<const double> target() const { return target_; }
  const MoveCounts& move_counts() const { return moves_; }
  std::uint64_t jitter_events() const { return jitter_events_; }
  Rng& rng() { return rng_; }

  /// Partial residual excluding tree m.
  std::vector<double> partial_residual(std::size_t m) const;

  /// Samples a move for tree m from the proposal mechanism. Returns nothing
  /// when the move cannot be formed (e.g. no splittable variable).
  std::optional<Proposal> sample_proposal(std::size_t m);
  /// Log Metropolis-Hastings ratio of `proposal` for tree m: tree-prior,
  /// marginal-likelihood and structural proposal terms.
  double proposal_log_ratio(std::size_t m, const Proposal& proposal) const;
  /// Propose, accept or reject. Returns true on acceptance.
  bool propose_and_accept(std::size_t m);
  /// MH step, then fresh beta in every leaf, refreshed fits and residual.
  void update_tree(std::size_t m);
  /// Same as update_tree but with a caller-supplied proposal and uniform
  /// (accept iff log(u) < ratio). Used to drive the sampler deterministically.
  bool update_tree_with(std::size_t m, const Proposal& proposal, double log_uniform);

  void update_sigma2();
  void update_latent();
  /// All trees in index order, then sigma2 (Gaussian) or the latents (binary).
  void sweep();

  /// Replaces the outcome (used by the joint-distribution tests).
  void set_outcome(std::vector<double> y);
  void set_sigma2(double sigma2) { ensemble_.sigma2 = sigma2; }

  double log_likelihood() const;
  double sse() const;
  /// max_i |residual_i - (target_i - sum_m fits[m][i])|.
  double residual_drift() const;

 private:
  struct LeafWork;

  void compute_leaf(LeafWork& w, std::span<const double> r) const;
  LeafWork shared_leaf(std::size_t m, NodeId id, const LeafParams& params, std::span<const double> r) const;
  LeafWork owned_leaf(NodeId id, std::vector<std::uint32_t> rows, const LeafParams& params,
                      std::span<const double> r) const;
  double log_ratio_impl(std::size_t m, const Proposal& proposal, std::span<const double> r,
                        std::vector<LeafWork>* old_work, std::vector<LeafWork>* new_work) const;
  bool finish_update(std::size_t m, const Proposal* proposal, double log_uniform);
  void rebuild_membership(std::size_t m);
  void resync_residual();

  const Dataset* data_;
  PriorConfig config_;
  Ensemble ensemble_;
  std::vector<std::vector<double>> fits_;
  std::vector<double> target_;
  std::vector<double> residual_;
  std::vector<std::map<NodeId, std::vector<std::uint32_t>>> members_;
  Rng rng_;
  MoveCounts moves_;
  mutable std::uint64_t jitter_events_ = 0;
};

// --- chains -----------------------------------------------------------------------

struct McmcSettings {
  int iterations = 2000;
  int burn_in = 1000;
  int thin = 10;
  std::uint64_t seed = 0;
  int chains = 1;
  /// Concurrent chains; 0 means the OpenMP default.
  int jobs = 0;
};

struct ChainResult {
  std::vector<Ensemble> draws;
  std::vector<IterationDiagnostics> diagnostics;
};

/// One chain with stream `chain` of settings.seed.
ChainResult run_chain(const Dataset& data, const PriorConfig& config, const McmcSettings& settings, int chain,
                      double y_center);

/// All chains (concurrently, up to settings.jobs), pooled in chain order.
/// `diagnostics`, if given, receives every chain's records in chain order.
PosteriorSamples fit(const Dataset& data, const TransformRecord& transform, const PriorConfig& config,
                     const McmcSettings& settings, std::vector<IterationDiagnostics>* diagnostics = nullptr);

/// Full prior draw of an ensemble (trees, inner weights, beta, sigma2).
Ensemble sample_ensemble_prior(const PriorConfig& config, const VariableInfo& vars, std::size_t q, Rng& rng);

}  // namespace ridgebart
