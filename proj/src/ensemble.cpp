#include "ridgebart/ensemble.hpp"

#include <cmath>

#include <fmt/format.h>

#include "ridgebart/errors.hpp"
#include "ridgebart/ridge_leaf.hpp"
#include "ridgebart/serialize.hpp"

namespace ridgebart {

double Ensemble::evaluate(std::span<const double> x, std::span<const double> z) const {
  double total = 0.0;
  for (const auto& tree : trees) total += leaf_eval(x, z, tree, activation);
  return total;
}

std::size_t Ensemble::total_leaves() const {
  std::size_t n = 0;
  for (const auto& t : trees) n += t.num_leaves();
  return n;
}

void PosteriorSamples::validate() const {
  if (chains < 1 || thin < 1 || burn_in < 0 || iterations < burn_in)
    throw InvariantViolationError("chain counts are inconsistent");
  const std::size_t expected = static_cast<std::size_t>(chains) * static_cast<std::size_t>(draws_per_chain());
  if (draws.size() != expected)
    throw InvariantViolationError(fmt::format("expected {} draws, found {}", expected, draws.size()));
  const std::size_t q = transform.z_columns.size();
  const auto d = static_cast<Eigen::Index>(config.basis_size());
  for (const auto& e : draws) {
    if (!(e.sigma2 > 0.0) || !std::isfinite(e.sigma2)) throw InvariantViolationError("sigma2 must be positive");
    if (e.trees.size() != static_cast<std::size_t>(config.num_trees))
      throw InvariantViolationError("draw has the wrong number of trees");
    for (const auto& t : e.trees) {
      for (const auto& [id, node] : t.nodes()) {
        if (!node.is_leaf) {
          if (node.rule.variable < 0 || static_cast<std::size_t>(node.rule.variable) >= transform.x_columns.size())
            throw InvariantViolationError("rule variable out of range");
          continue;
        }
        const LeafParams& leaf = node.leaf;
        if (!(leaf.rho > 0.0) || leaf.beta.size() != d || leaf.offsets.size() != d ||
            leaf.omega.cols() != d || static_cast<std::size_t>(leaf.omega.rows()) != q)
          throw InvariantViolationError("leaf parameters have the wrong shape");
        if (!leaf.beta.allFinite() || !leaf.omega.allFinite() || !leaf.offsets.allFinite())
          throw InvariantViolationError("non-finite leaf parameter");
      }
    }
  }
}

bool operator==(const PosteriorSamples& a, const PosteriorSamples& b) {
  return a.seed == b.seed && a.chains == b.chains && a.iterations == b.iterations && a.burn_in == b.burn_in &&
         a.thin == b.thin && a.config_hash == b.config_hash && a.outcome == b.outcome &&
         config_json(a.config, a.outcome) == config_json(b.config, b.outcome) && a.transform == b.transform &&
         a.draws == b.draws;
}

std::string config_hash(const PriorConfig& config, Outcome outcome) {
  return fmt::format("{:016x}", fnv1a(config_json(config, outcome)));
}

}  // namespace ridgebart
