#include "ridgebart/tree.hpp"

#include <cmath>
#include <limits>

#include "ridgebart/errors.hpp"
#include "ridgebart/rng.hpp"

namespace ridgebart {

LeafParams LeafParams::zeros(std::size_t q, std::size_t d) {
  LeafParams p;
  p.rho = 1.0;
  p.omega = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(q), static_cast<Eigen::Index>(d));
  p.offsets = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(d));
  p.beta = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(d));
  return p;
}

namespace {

bool same_matrix(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() && (a.size() == 0 || a == b);
}

bool same_vector(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return a.size() == b.size() && (a.size() == 0 || a == b);
}

}  // namespace

bool operator==(const LeafParams& a, const LeafParams& b) {
  return a.rho == b.rho && same_matrix(a.omega, b.omega) && same_vector(a.offsets, b.offsets) &&
         same_vector(a.beta, b.beta);
}

RidgeTree::RidgeTree(LeafParams root) {
  TreeNode node;
  node.leaf = std::move(root);
  nodes_.emplace(kRootId, std::move(node));
}

RidgeTree RidgeTree::from_nodes(std::map<NodeId, TreeNode> nodes) {
  if (!nodes.contains(kRootId)) throw TreeStructureError("tree has no root");
  for (const auto& [id, node] : nodes) {
    if (id == 0) throw TreeStructureError("node id 0 is invalid");
    if (depth_of(id) > Branching::kMaxDepth) throw TreeStructureError("node deeper than the depth cap");
    if (id != kRootId) {
      auto parent = nodes.find(parent_of(id));
      if (parent == nodes.end() || parent->second.is_leaf)
        throw TreeStructureError("node without an internal parent");
    }
    if (!node.is_leaf && (!nodes.contains(left_child(id)) || !nodes.contains(right_child(id))))
      throw TreeStructureError("internal node missing a child");
  }
  RidgeTree tree;
  tree.nodes_ = std::move(nodes);
  return tree;
}

bool RidgeTree::is_leaf(NodeId id) const { return node(id).is_leaf; }

const TreeNode& RidgeTree::node(NodeId id) const {
  auto it = nodes_.find(id);
  if (it == nodes_.end()) throw TreeStructureError("unknown node id");
  return it->second;
}

const LeafParams& RidgeTree::leaf(NodeId id) const {
  const TreeNode& n = node(id);
  if (!n.is_leaf) throw TreeStructureError("node is not a leaf");
  return n.leaf;
}

LeafParams& RidgeTree::leaf(NodeId id) {
  return const_cast<LeafParams&>(std::as_const(*this).leaf(id));
}

std::vector<NodeId> RidgeTree::leaves() const {
  std::vector<NodeId> out;
  for (const auto& [id, node] : nodes_)
    if (node.is_leaf) out.push_back(id);
  return out;
}

std::vector<NodeId> RidgeTree::no_grandchildren() const {
  std::vector<NodeId> out;
  for (const auto& [id, node] : nodes_) {
    if (node.is_leaf) continue;
    if (nodes_.at(left_child(id)).is_leaf && nodes_.at(right_child(id)).is_leaf) out.push_back(id);
  }
  return out;
}

std::size_t RidgeTree::num_leaves() const {
  // A full binary tree with k internal nodes has k + 1 leaves.
  return (nodes_.size() + 1) / 2;
}

int RidgeTree::max_depth() const {
  int d = 0;
  for (const auto& entry : nodes_) d = std::max(d, depth_of(entry.first));
  return d;
}

NodeId RidgeTree::route(std::span<const double> x) const {
  NodeId id = kRootId;
  for (;;) {
    const TreeNode& n = nodes_.find(id)->second;
    if (n.is_leaf) return id;
    id = n.rule.goes_left(x[static_cast<std::size_t>(n.rule.variable)]) ? left_child(id) : right_child(id);
  }
}

void RidgeTree::grow(NodeId id, const DecisionRule& rule, LeafParams left, LeafParams right) {
  auto it = nodes_.find(id);
  if (it == nodes_.end() || !it->second.is_leaf) throw TreeStructureError("grow target is not a leaf");
  if (depth_of(id) >= Branching::kMaxDepth) throw TreeStructureError("grow beyond the depth cap");
  it->second.is_leaf = false;
  it->second.rule = rule;
  it->second.leaf = LeafParams{};
  TreeNode l, r;
  l.leaf = std::move(left);
  r.leaf = std::move(right);
  nodes_.emplace(left_child(id), std::move(l));
  nodes_.emplace(right_child(id), std::move(r));
}

void RidgeTree::prune(NodeId id, LeafParams merged) {
  auto it = nodes_.find(id);
  if (it == nodes_.end() || it->second.is_leaf) throw TreeStructureError("prune target is not internal");
  auto l = nodes_.find(left_child(id));
  auto r = nodes_.find(right_child(id));
  if (!l->second.is_leaf || !r->second.is_leaf) throw TreeStructureError("prune target has grandchildren");
  nodes_.erase(l);
  nodes_.erase(r);
  it->second.is_leaf = true;
  it->second.rule = DecisionRule{};
  it->second.leaf = std::move(merged);
}

bool RidgeTree::same_structure(const RidgeTree& other) const {
  if (nodes_.size() != other.nodes_.size()) return false;
  for (auto a = nodes_.begin(), b = other.nodes_.begin(); a != nodes_.end(); ++a, ++b) {
    if (a->first != b->first || a->second.is_leaf != b->second.is_leaf) return false;
    if (!a->second.is_leaf && !(a->second.rule == b->second.rule)) return false;
  }
  return true;
}

// --- mechanics ---------------------------------------------------------------

std::uint64_t all_levels_mask(int num_levels) {
  return num_levels >= 64 ? ~0ULL : ((1ULL << num_levels) - 1ULL);
}

CellBounds cell_bounds(const RidgeTree& tree, NodeId id, const VariableInfo& vars) {
  CellBounds cell;
  const std::size_t p = vars.size();
  cell.lower.assign(p, 0.0);
  cell.upper.assign(p, 1.0);
  cell.levels.assign(p, 0);
  for (std::size_t j = 0; j < p; ++j)
    if (vars.categorical(j)) cell.levels[j] = all_levels_mask(vars.levels[j]);

  // Walk from the root down to `id`, narrowing along the way.
  for (int d = 0; d < depth_of(id); ++d) {
    NodeId ancestor = id >> (depth_of(id) - d);
    NodeId next = id >> (depth_of(id) - d - 1);
    cell = child_cell(cell, tree.node(ancestor).rule, next == left_child(ancestor));
  }
  return cell;
}

CellBounds child_cell(const CellBounds& parent, const DecisionRule& rule, bool left) {
  CellBounds cell = parent;
  const auto j = static_cast<std::size_t>(rule.variable);
  if (rule.categorical) {
    cell.levels[j] &= left ? rule.left_levels : ~rule.left_levels;
  } else if (left) {
    cell.upper[j] = std::min(cell.upper[j], rule.cutpoint);
  } else {
    cell.lower[j] = std::max(cell.lower[j], rule.cutpoint);
  }
  return cell;
}

double log_leaf_probability(int depth, const CellBounds& cell, const Branching& branching, const VariableInfo& vars) {
  if (splittable_variables(cell, vars).empty()) return 0.0;
  return std::log1p(-branching.split_probability(depth));
}

std::vector<int> splittable_variables(const CellBounds& cell, const VariableInfo& vars) {
  std::vector<int> out;
  for (std::size_t j = 0; j < vars.size(); ++j) {
    bool ok = vars.categorical(j) ? std::popcount(cell.levels[j]) >= 2 : cell.lower[j] < cell.upper[j];
    if (ok) out.push_back(static_cast<int>(j));
  }
  return out;
}

NodeId assign_leaf(std::span<const double> x, const RidgeTree& tree) { return tree.route(x); }

DecisionRule sample_decision_rule(const RidgeTree& tree, NodeId id, const VariableInfo& vars, Rng& rng) {
  CellBounds cell = cell_bounds(tree, id, vars);
  std::vector<int> candidates = splittable_variables(cell, vars);
  if (candidates.empty()) throw NoSplittableVariable();

  DecisionRule rule;
  rule.variable = candidates[rng.uniform_index(candidates.size())];
  const auto j = static_cast<std::size_t>(rule.variable);
  if (vars.categorical(j)) {
    rule.categorical = true;
    const std::uint64_t reachable = cell.levels[j];
    const int k = std::popcount(reachable);
    // Uniform over the 2^k - 2 nonempty proper subsets: pick a code in
    // [1, 2^k - 2] and scatter its bits onto the reachable levels.
    const std::uint64_t code = 1 + rng.uniform_index((1ULL << k) - 2);
    std::uint64_t mask = 0;
    int bit = 0;
    for (int level = 0; level < 64; ++level) {
      if (!((reachable >> level) & 1ULL)) continue;
      if ((code >> bit) & 1ULL) mask |= 1ULL << level;
      ++bit;
    }
    rule.left_levels = mask;
  } else {
    double c;
    do {
      c = rng.uniform(cell.lower[j], cell.upper[j]);
    } while (!(c > cell.lower[j] && c < cell.upper[j]));
    rule.cutpoint = c;
  }
  return rule;
}

double log_rule_probability(const DecisionRule& rule, const CellBounds& cell, const VariableInfo& vars) {
  std::vector<int> candidates = splittable_variables(cell, vars);
  if (candidates.empty()) return -std::numeric_limits<double>::infinity();
  double lp = -std::log(static_cast<double>(candidates.size()));
  const auto j = static_cast<std::size_t>(rule.variable);
  if (rule.categorical) {
    const int k = std::popcount(cell.levels[j]);
    lp -= std::log(std::ldexp(1.0, k) - 2.0);
  } else {
    lp -= std::log(cell.upper[j] - cell.lower[j]);
  }
  return lp;
}

namespace {

void grow_from_prior(RidgeTree& tree, NodeId id, const Branching& branching, const VariableInfo& vars,
                     Rng& rng) {
  const int d = depth_of(id);
  if (!rng.bernoulli(branching.split_probability(d))) return;
  DecisionRule rule;
  try {
    rule = sample_decision_rule(tree, id, vars, rng);
  } catch (const NoSplittableVariable&) {
    return;
  }
  tree.grow(id, rule, LeafParams{}, LeafParams{});
  grow_from_prior(tree, left_child(id), branching, vars, rng);
  grow_from_prior(tree, right_child(id), branching, vars, rng);
}

}  // namespace

RidgeTree sample_tree_prior(const Branching& branching, const VariableInfo& vars, Rng& rng) {
  RidgeTree tree;
  grow_from_prior(tree, kRootId, branching, vars, rng);
  return tree;
}

double log_tree_structure_prior(const RidgeTree& tree, const Branching& branching) {
  double lp = 0.0;
  for (const auto& [id, node] : tree.nodes()) {
    double ps = branching.split_probability(depth_of(id));
    lp += node.is_leaf ? std::log1p(-ps) : std::log(ps);
  }
  return lp;
}

double log_tree_prior(const RidgeTree& tree, const Branching& branching, const VariableInfo& vars) {
  double lp = 0.0;
  for (const auto& [id, node] : tree.nodes()) {
    const CellBounds cell = cell_bounds(tree, id, vars);
    if (node.is_leaf) {
      lp += log_leaf_probability(depth_of(id), cell, branching, vars);
    } else {
      lp += std::log(branching.split_probability(depth_of(id))) + log_rule_probability(node.rule, cell, vars);
    }
  }
  return lp;
}

RidgeTree grow_structure(const RidgeTree& tree, NodeId leaf, const DecisionRule& rule) {
  RidgeTree out = tree;
  out.grow(leaf, rule, LeafParams{}, LeafParams{});
  return out;
}

RidgeTree prune_structure(const RidgeTree& tree, NodeId node) {
  RidgeTree out = tree;
  out.prune(node, LeafParams{});
  return out;
}

bool has_nonempty_cells(const RidgeTree& tree, const VariableInfo& vars) {
  for (NodeId id : tree.leaves()) {
    CellBounds cell = cell_bounds(tree, id, vars);
    for (std::size_t j = 0; j < vars.size(); ++j) {
      if (vars.categorical(j) ? cell.levels[j] == 0 : !(cell.lower[j] < cell.upper[j])) return false;
    }
  }
  return true;
}

}  // namespace ridgebart
