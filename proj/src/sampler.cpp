#include "ridgebart/sampler.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <exception>
#include <numbers>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "ridgebart/errors.hpp"
#include "ridgebart/kernels.hpp"
#include "ridgebart/ridge_leaf.hpp"
#include "ridgebart/serialize.hpp"

namespace ridgebart {

// --- leaf algebra ---------------------------------------------------------------

SuffStats leaf_suffstats(const Eigen::MatrixXd& phi, std::span<const double> r, double sigma2, double tau) {
  const Eigen::Index d = phi.cols();
  SuffStats s;
  s.n_leaf = static_cast<std::size_t>(phi.rows());
  Eigen::Map<const Eigen::VectorXd> rv(r.data(), static_cast<Eigen::Index>(r.size()));
  s.precision = phi.transpose() * phi / sigma2;
  s.precision.diagonal().array() += 1.0 / (tau * tau);
  s.theta = phi.transpose() * rv / sigma2;
  if (phi.rows() == 0) {
    s.precision = Eigen::MatrixXd::Identity(d, d) / (tau * tau);
    s.theta = Eigen::VectorXd::Zero(d);
  }
  return s;
}

LeafPosterior::LeafPosterior(const SuffStats& stats) : llt_(stats.precision), theta_(stats.theta) {
  if (llt_.info() != Eigen::Success) {
    Eigen::MatrixXd p = stats.precision;
    p.diagonal().array() += 1e-12;
    llt_.compute(p);
    jittered_ = true;
    if (llt_.info() != Eigen::Success) throw NumericalError("leaf precision is not positive definite");
  }
}

double LeafPosterior::log_marginal(double tau) const {
  const Eigen::MatrixXd& l = llt_.matrixLLT();
  const Eigen::Index d = l.rows();
  double log_det_half = 0.0;
  for (Eigen::Index k = 0; k < d; ++k) log_det_half += std::log(l(k, k));
  Eigen::VectorXd w = llt_.matrixL().solve(theta_);
  return -static_cast<double>(d) * std::log(tau) - log_det_half + 0.5 * w.squaredNorm();
}

Eigen::VectorXd LeafPosterior::mean() const { return llt_.solve(theta_); }

Eigen::VectorXd LeafPosterior::draw_beta(Rng& rng) const {
  const Eigen::Index d = theta_.size();
  Eigen::VectorXd xi(d);
  for (Eigen::Index k = 0; k < d; ++k) xi[k] = rng.normal();
  // L^-T xi has covariance (L L^T)^-1 = P^-1.
  return mean() + llt_.matrixU().solve(xi);
}

double log_marginal_leaf(const SuffStats& stats, double tau) { return LeafPosterior(stats).log_marginal(tau); }

Eigen::VectorXd draw_beta(const SuffStats& stats, Rng& rng) { return LeafPosterior(stats).draw_beta(rng); }

double draw_latent(double mean, bool positive, Rng& rng) {
  // latent = mean + e with e ~ N(0,1) restricted so that latent > 0 (or <= 0).
  if (positive) return mean + rng.truncated_normal_above(-mean);
  return mean - rng.truncated_normal_above(mean);
}

double draw_sigma2(double nu_sigma, double lambda_sigma, std::size_t n, double sse, Rng& rng) {
  return rng.inverse_gamma(0.5 * (nu_sigma + static_cast<double>(n)), 0.5 * (nu_sigma * lambda_sigma + sse));
}

double calibrate_lambda_sigma(double nu_sigma, double variance, double quantile) {
  // sigma2 = scale / G with G ~ Gamma(nu/2, 1) and scale = nu lambda / 2.
  const double g = boost::math::gamma_p_inv(0.5 * nu_sigma, 1.0 - quantile);
  return 2.0 * variance * g / nu_sigma;
}

void calibrate_prior(PriorConfig& config, const Dataset& data, double y_min, double y_max) {
  if (data.outcome == Outcome::kBinary) {
    config.tau = default_tau(-3.0, 3.0, config.num_trees, config.basis_size());
    return;
  }
  config.tau = default_tau(y_min, y_max, config.num_trees, config.basis_size());
  double mean = 0.0;
  for (double v : data.y) mean += v;
  mean /= static_cast<double>(data.n);
  double var = 0.0;
  for (double v : data.y) var += (v - mean) * (v - mean);
  var = data.n > 1 ? var / static_cast<double>(data.n - 1) : 1.0;
  if (!(var > 0.0)) var = 1.0;
  config.lambda_sigma = calibrate_lambda_sigma(config.nu_sigma, var);
}

MoveProbabilities MoveProbabilities::for_tree(const RidgeTree& tree) {
  MoveProbabilities p;
  if (tree.num_leaves() == 1) {
    p.grow += p.prune;
    p.prune = 0.0;
  }
  return p;
}

// --- chain state ----------------------------------------------------------------

struct ChainState::LeafWork {
  NodeId id = 0;
  std::vector<std::uint32_t> owned_rows;
  std::span<const std::uint32_t> rows;
  const LeafParams* params = nullptr;
  Eigen::MatrixXd phi;
  std::optional<LeafPosterior> posterior;
  double log_marginal = 0.0;
};

ChainState::ChainState(const Dataset& data, const PriorConfig& config, Ensemble initial, Rng rng)
    : data_(&data), config_(config), ensemble_(std::move(initial)), rng_(std::move(rng)) {
  config_.validate();
  if (ensemble_.trees.size() != static_cast<std::size_t>(config_.num_trees))
    throw ConfigError("initial ensemble has the wrong number of trees");
  ensemble_.activation = config_.activation;
  const std::size_t n = data.n;
  const std::size_t trees = ensemble_.trees.size();
  fits_.assign(trees, std::vector<double>(n, 0.0));
  members_.resize(trees);
  for (std::size_t m = 0; m < trees; ++m) {
    kernels::evaluate_tree(ensemble_.trees[m], config_.activation, data.x, data.z, data.p, data.q, fits_[m]);
    rebuild_membership(m);
  }
  residual_.assign(n, 0.0);
  if (data.outcome == Outcome::kGaussian) {
    target_ = data.y;
    resync_residual();
  } else {
    ensemble_.sigma2 = 1.0;
    target_.assign(n, 0.0);
    update_latent();
  }
}

ChainState ChainState::initialize(const Dataset& data, const PriorConfig& config, double y_center, Rng rng) {
  Ensemble e;
  e.activation = config.activation;
  e.y_center = y_center;
  for (int m = 0; m < config.num_trees; ++m) e.trees.emplace_back(sample_inner_weights(config, data.q, rng));
  if (data.outcome == Outcome::kGaussian) {
    double mean = 0.0;
    for (double v : data.y) mean += v;
    mean /= static_cast<double>(data.n);
    double var = 0.0;
    for (double v : data.y) var += (v - mean) * (v - mean);
    var = data.n > 1 ? var / static_cast<double>(data.n - 1) : 1.0;
    e.sigma2 = var > 0.0 ? var : 1.0;
  } else {
    e.sigma2 = 1.0;
  }
  return ChainState(data, config, std::move(e), std::move(rng));
}

void ChainState::rebuild_membership(std::size_t m) {
  auto& members = members_[m];
  members.clear();
  const RidgeTree& tree = ensemble_.trees[m];
  for (NodeId id : tree.leaves()) members[id];
  for (std::size_t i = 0; i < data_->n; ++i) members[tree.route(data_->x_row(i))].push_back(static_cast<std::uint32_t>(i));
}

void ChainState::resync_residual() {
  const std::size_t n = data_->n;
  for (std::size_t i = 0; i < n; ++i) {
    double f = 0.0;
    for (const auto& col : fits_) f += col[i];
    residual_[i] = target_[i] - f;
  }
}

double ChainState::residual_drift() const {
  double worst = 0.0;
  for (std::size_t i = 0; i < data_->n; ++i) {
    double f = 0.0;
    for (const auto& col : fits_) f += col[i];
    worst = std::max(worst, std::abs(residual_[i] - (target_[i] - f)));
  }
  return worst;
}

std::vector<double> ChainState::partial_residual(std::size_t m) const {
  std::vector<double> r(data_->n);
  const auto& f = fits_[m];
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = residual_[i] + f[i];
  return r;
}

void ChainState::compute_leaf(LeafWork& w, std::span<const double> r) const {
  build_basis(*data_, w.rows, *w.params, config_.activation, w.phi);
  Eigen::VectorXd r_leaf(static_cast<Eigen::Index>(w.rows.size()));
  for (std::size_t k = 0; k < w.rows.size(); ++k) r_leaf[static_cast<Eigen::Index>(k)] = r[w.rows[k]];
  SuffStats stats = leaf_suffstats(w.phi, {r_leaf.data(), w.rows.size()}, ensemble_.sigma2, config_.tau);
  try {
    w.posterior.emplace(stats);
    if (w.posterior->jittered()) ++jitter_events_;
    w.log_marginal = w.posterior->log_marginal(config_.tau);
  } catch (const NumericalError&) {
    ++jitter_events_;
    w.posterior.reset();
    w.log_marginal = -std::numeric_limits<double>::infinity();
  }
}

ChainState::LeafWork ChainState::shared_leaf(std::size_t m, NodeId id, const LeafParams& params,
                                             std::span<const double> r) const {
  LeafWork w;
  w.id = id;
  w.rows = members_[m].at(id);
  w.params = &params;
  compute_leaf(w, r);
  return w;
}

ChainState::LeafWork ChainState::owned_leaf(NodeId id, std::vector<std::uint32_t> rows, const LeafParams& params,
                                            std::span<const double> r) const {
  LeafWork w;
  w.id = id;
  w.owned_rows = std::move(rows);
  w.rows = w.owned_rows;
  w.params = &params;
  compute_leaf(w, r);
  return w;
}

std::optional<Proposal> ChainState::sample_proposal(std::size_t m) {
  const RidgeTree& tree = ensemble_.trees[m];
  const MoveProbabilities probs = MoveProbabilities::for_tree(tree);
  Proposal prop;
  const double u = rng_.uniform();
  if (u < probs.grow) {
    prop.kind = MoveKind::kGrow;
    std::vector<NodeId> leaves = tree.leaves();
    prop.node = leaves[rng_.uniform_index(leaves.size())];
    try {
      prop.rule = sample_decision_rule(tree, prop.node, data_->variables, rng_);
    } catch (const NoSplittableVariable&) {
      return std::nullopt;
    }
    prop.fresh.emplace(left_child(prop.node), sample_inner_weights(config_, data_->q, rng_));
    prop.fresh.emplace(right_child(prop.node), sample_inner_weights(config_, data_->q, rng_));
  } else if (u < probs.grow + probs.prune) {
    prop.kind = MoveKind::kPrune;
    std::vector<NodeId> nog = tree.no_grandchildren();
    prop.node = nog[rng_.uniform_index(nog.size())];
    prop.fresh.emplace(prop.node, sample_inner_weights(config_, data_->q, rng_));
  } else {
    prop.kind = MoveKind::kChange;
    for (NodeId id : tree.leaves()) prop.fresh.emplace(id, sample_inner_weights(config_, data_->q, rng_));
  }
  return prop;
}

double ChainState::log_ratio_impl(std::size_t m, const Proposal& prop, std::span<const double> r,
                                  std::vector<LeafWork>* old_work, std::vector<LeafWork>* new_work) const {
  const RidgeTree& tree = ensemble_.trees[m];
  const auto& members = members_[m];
  const Branching& br = config_.branching;
  const VariableInfo& vars = data_->variables;
  const double prune_prob = MoveProbabilities{}.prune;

  std::vector<LeafWork> olds, news;
  double prior_new = 0.0, prior_old = 0.0;
  double log_q_forward = 0.0, log_q_reverse = 0.0;

  auto split_rows = [&](std::span<const std::uint32_t> rows, const DecisionRule& rule) {
    std::pair<std::vector<std::uint32_t>, std::vector<std::uint32_t>> out;
    const auto j = static_cast<std::size_t>(rule.variable);
    for (std::uint32_t i : rows) {
      (rule.goes_left(data_->x[static_cast<std::size_t>(i) * data_->p + j]) ? out.first : out.second).push_back(i);
    }
    return out;
  };
  switch (prop.kind) {
    case MoveKind::kGrow: {
      const NodeId id = prop.node;
      if (!tree.is_leaf(id)) throw TreeStructureError("grow target is not a leaf");
      const int d = depth_of(id);
      const CellBounds cell = cell_bounds(tree, id, vars);
      const double lrule = log_rule_probability(prop.rule, cell, vars);
      prior_new = std::log(br.split_probability(d)) + lrule +
                  log_leaf_probability(d + 1, child_cell(cell, prop.rule, true), br, vars) +
                  log_leaf_probability(d + 1, child_cell(cell, prop.rule, false), br, vars);
      prior_old = log_leaf_probability(d, cell, br, vars);

      olds.push_back(shared_leaf(m, id, tree.leaf(id), r));
      auto [left, right] = split_rows(members.at(id), prop.rule);
      news.push_back(owned_leaf(left_child(id), std::move(left), prop.fresh.at(left_child(id)), r));
      news.push_back(owned_leaf(right_child(id), std::move(right), prop.fresh.at(right_child(id)), r));

      const double leaves = static_cast<double>(tree.num_leaves());
      const bool sibling_leaf = id != kRootId && tree.is_leaf(id ^ 1ULL);
      const double nog_after = static_cast<double>(tree.no_grandchildren().size()) + 1.0 - (sibling_leaf ? 1.0 : 0.0);
      log_q_forward = std::log(MoveProbabilities::for_tree(tree).grow) - std::log(leaves) + lrule;
      log_q_reverse = std::log(prune_prob) - std::log(nog_after);
      break;
    }
    case MoveKind::kPrune: {
      const NodeId id = prop.node;
      if (tree.is_leaf(id) || !tree.is_leaf(left_child(id)) || !tree.is_leaf(right_child(id)))
        throw TreeStructureError("prune target must have two leaf children");
      const int d = depth_of(id);
      const DecisionRule& rule = tree.node(id).rule;
      const CellBounds cell = cell_bounds(tree, id, vars);
      const double lrule = log_rule_probability(rule, cell, vars);
      prior_new = log_leaf_probability(d, cell, br, vars);
      prior_old = std::log(br.split_probability(d)) + lrule +
                  log_leaf_probability(d + 1, child_cell(cell, rule, true), br, vars) +
                  log_leaf_probability(d + 1, child_cell(cell, rule, false), br, vars);

      olds.push_back(shared_leaf(m, left_child(id), tree.leaf(left_child(id)), r));
      olds.push_back(shared_leaf(m, right_child(id), tree.leaf(right_child(id)), r));
      const auto& lrows = members.at(left_child(id));
      const auto& rrows = members.at(right_child(id));
      std::vector<std::uint32_t> merged;
      merged.reserve(lrows.size() + rrows.size());
      std::merge(lrows.begin(), lrows.end(), rrows.begin(), rrows.end(), std::back_inserter(merged));
      news.push_back(owned_leaf(id, std::move(merged), prop.fresh.at(id), r));

      const double leaves_after = static_cast<double>(tree.num_leaves()) - 1.0;
      const double grow_after = leaves_after == 1.0 ? MoveProbabilities{}.grow + prune_prob : MoveProbabilities{}.grow;
      log_q_forward = std::log(prune_prob) - std::log(static_cast<double>(tree.no_grandchildren().size()));
      log_q_reverse = std::log(grow_after) - std::log(leaves_after) + lrule;
      break;
    }
    case MoveKind::kChange: {
      for (NodeId id : tree.leaves()) {
        olds.push_back(shared_leaf(m, id, tree.leaf(id), r));
        news.push_back(shared_leaf(m, id, prop.fresh.at(id), r));
      }
      break;
    }
  }

  double marg_new = 0.0, marg_old = 0.0;
  for (const auto& w : news) marg_new += w.log_marginal;
  for (const auto& w : olds) marg_old += w.log_marginal;
  const double ratio = (prior_new - prior_old) + (marg_new - marg_old) + (log_q_reverse - log_q_forward);

  if (old_work) *old_work = std::move(olds);
  if (new_work) *new_work = std::move(news);
  return ratio;
}

double ChainState::proposal_log_ratio(std::size_t m, const Proposal& proposal) const {
  std::vector<double> r = partial_residual(m);
  return log_ratio_impl(m, proposal, r, nullptr, nullptr);
}

bool ChainState::propose_and_accept(std::size_t m) {
  std::optional<Proposal> prop = sample_proposal(m);
  if (!prop) return false;
  const double log_u = std::log(rng_.uniform());
  return finish_update(m, &*prop, log_u);
}

void ChainState::update_tree(std::size_t m) { propose_and_accept(m); }

bool ChainState::update_tree_with(std::size_t m, const Proposal& proposal, double log_uniform) {
  return finish_update(m, &proposal, log_uniform);
}

bool ChainState::finish_update(std::size_t m, const Proposal* prop, double log_u) {
  RidgeTree& tree = ensemble_.trees[m];
  auto& members = members_[m];
  const std::vector<double> r = partial_residual(m);

  std::vector<LeafWork> olds, news;
  bool accepted = false;
  if (prop) {
    const auto k = static_cast<std::size_t>(prop->kind);
    ++moves_.proposed[k];
    double ratio = log_ratio_impl(m, *prop, r, &olds, &news);
    accepted = log_u < ratio;
    if (accepted) ++moves_.accepted[k];
  }

  if (accepted) {
    switch (prop->kind) {
      case MoveKind::kGrow: {
        const NodeId id = prop->node;
        tree.grow(id, prop->rule, prop->fresh.at(left_child(id)), prop->fresh.at(right_child(id)));
        members.erase(id);
        for (auto& w : news) {
          members[w.id] = std::move(w.owned_rows);
          w.rows = members[w.id];
          w.params = &tree.leaf(w.id);
        }
        break;
      }
      case MoveKind::kPrune: {
        const NodeId id = prop->node;
        tree.prune(id, prop->fresh.at(id));
        members.erase(left_child(id));
        members.erase(right_child(id));
        for (auto& w : news) {
          members[w.id] = std::move(w.owned_rows);
          w.rows = members[w.id];
          w.params = &tree.leaf(w.id);
        }
        break;
      }
      case MoveKind::kChange: {
        for (auto& w : news) {
          tree.leaf(w.id) = prop->fresh.at(w.id);
          w.params = &tree.leaf(w.id);
        }
        break;
      }
    }
  }

  std::vector<LeafWork>& reusable = accepted ? news : olds;
  auto& f = fits_[m];
  for (NodeId id : tree.leaves()) {
    auto it = std::find_if(reusable.begin(), reusable.end(), [&](const LeafWork& w) { return w.id == id; });
    LeafWork fresh_work;
    LeafWork* work = nullptr;
    if (it != reusable.end()) {
      work = &*it;
    } else {
      fresh_work = shared_leaf(m, id, tree.leaf(id), r);
      work = &fresh_work;
    }
    LeafParams& leaf = tree.leaf(id);
    if (work->posterior) leaf.beta = work->posterior->draw_beta(rng_);
    Eigen::VectorXd fitted = work->phi * leaf.beta;
    for (std::size_t k = 0; k < work->rows.size(); ++k) f[work->rows[k]] = fitted[static_cast<Eigen::Index>(k)];
  }
  for (std::size_t i = 0; i < r.size(); ++i) residual_[i] = r[i] - f[i];
  assert(residual_drift() < 1e-9);
  return accepted;
}

void ChainState::update_sigma2() {
  if (data_->outcome == Outcome::kBinary) return;
  ensemble_.sigma2 = draw_sigma2(config_.nu_sigma, config_.lambda_sigma, data_->n, sse(), rng_);
}

void ChainState::update_latent() {
  if (data_->outcome != Outcome::kBinary) return;
  const double offset = ensemble_.y_center;
  for (std::size_t i = 0; i < data_->n; ++i) {
    double f = 0.0;
    for (const auto& col : fits_) f += col[i];
    const double latent = draw_latent(offset + f, data_->y[i] == 1.0, rng_);
    target_[i] = latent - offset;
    residual_[i] = target_[i] - f;
  }
}

void ChainState::sweep() {
  for (std::size_t m = 0; m < ensemble_.trees.size(); ++m) update_tree(m);
  resync_residual();
  if (data_->outcome == Outcome::kGaussian) {
    update_sigma2();
  } else {
    update_latent();
  }
}

void ChainState::set_outcome(std::vector<double> y) {
  if (y.size() != data_->n) throw DimensionMismatchError("outcome length does not match the data");
  target_ = std::move(y);
  resync_residual();
}

double ChainState::sse() const {
  double s = 0.0;
  for (double v : residual_) s += v * v;
  return s;
}

double ChainState::log_likelihood() const {
  const auto n = static_cast<double>(data_->n);
  if (data_->outcome == Outcome::kGaussian) {
    const double s2 = ensemble_.sigma2;
    return -0.5 * n * std::log(2.0 * std::numbers::pi * s2) - 0.5 * sse() / s2;
  }
  boost::math::normal_distribution<double> std_normal;
  double ll = 0.0;
  for (std::size_t i = 0; i < data_->n; ++i) {
    double f = ensemble_.y_center;
    for (const auto& col : fits_) f += col[i];
    const double arg = data_->y[i] == 1.0 ? f : -f;
    ll += std::log(std::max(boost::math::cdf(std_normal, arg), 1e-300));
  }
  return ll;
}

// --- chains -------------------------------------------------------------------------

ChainResult run_chain(const Dataset& data, const PriorConfig& config, const McmcSettings& settings, int chain,
                      double y_center) {
  ChainResult out;
  ChainState state = ChainState::initialize(data, config, y_center, Rng(settings.seed, static_cast<std::uint64_t>(chain)));
  MoveCounts previous;
  for (int t = 1; t <= settings.iterations; ++t) {
    state.sweep();
    IterationDiagnostics diag;
    diag.chain = chain;
    diag.iteration = t;
    diag.sigma2 = state.ensemble().sigma2;
    diag.log_likelihood = state.log_likelihood();
    const MoveCounts& now = state.move_counts();
    for (std::size_t k = 0; k < 3; ++k) {
      diag.moves.proposed[k] = now.proposed[k] - previous.proposed[k];
      diag.moves.accepted[k] = now.accepted[k] - previous.accepted[k];
    }
    previous = now;
    diag.leaves = state.ensemble().total_leaves();
    diag.jitter_events = state.jitter_events();
    out.diagnostics.push_back(diag);
    if (t > settings.burn_in && (t - settings.burn_in) % settings.thin == 0) {
      out.draws.push_back(state.ensemble());
      out.draws.back().y_center = y_center;
    }
  }
  return out;
}

PosteriorSamples fit(const Dataset& data, const TransformRecord& transform, const PriorConfig& config,
                     const McmcSettings& settings, std::vector<IterationDiagnostics>* diagnostics) {
  data.validate();
  config.validate();
  if (settings.chains < 1 || settings.thin < 1 || settings.burn_in < 0 || settings.iterations < settings.burn_in)
    throw ConfigError("need chains >= 1, thin >= 1 and 0 <= burn-in <= iterations");

  std::vector<ChainResult> results(static_cast<std::size_t>(settings.chains));
  std::vector<std::exception_ptr> errors(results.size());
  const int jobs = settings.jobs > 0 ? settings.jobs : kernels::max_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(jobs)
  for (int c = 0; c < settings.chains; ++c) {
    try {
      results[static_cast<std::size_t>(c)] = run_chain(data, config, settings, c, transform.y_center);
    } catch (...) {
      errors[static_cast<std::size_t>(c)] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  PosteriorSamples s;
  s.seed = settings.seed;
  s.chains = settings.chains;
  s.iterations = settings.iterations;
  s.burn_in = settings.burn_in;
  s.thin = settings.thin;
  s.outcome = data.outcome;
  s.config = config;
  s.config_hash = config_hash(config, data.outcome);
  s.transform = transform;
  for (auto& r : results) {
    for (auto& d : r.draws) s.draws.push_back(std::move(d));
    if (diagnostics) diagnostics->insert(diagnostics->end(), r.diagnostics.begin(), r.diagnostics.end());
  }
  return s;
}

Ensemble sample_ensemble_prior(const PriorConfig& config, const VariableInfo& vars, std::size_t q, Rng& rng) {
  Ensemble e;
  e.activation = config.activation;
  for (int m = 0; m < config.num_trees; ++m) {
    RidgeTree tree = sample_tree_prior(config.branching, vars, rng);
    for (NodeId id : tree.leaves()) tree.leaf(id) = sample_leaf_prior(config, q, rng);
    e.trees.push_back(std::move(tree));
  }
  e.sigma2 = rng.inverse_gamma(0.5 * config.nu_sigma, 0.5 * config.nu_sigma * config.lambda_sigma);
  return e;
}

}  // namespace ridgebart
