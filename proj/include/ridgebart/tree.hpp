#pragma once

#include <bit>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "ridgebart/core.hpp"

namespace ridgebart {

class Rng;

/// Heap index: root 1, children of k are 2k and 2k+1.
using NodeId = std::uint64_t;
inline constexpr NodeId kRootId = 1;

inline int depth_of(NodeId id) { return static_cast<int>(std::bit_width(id)) - 1; }
inline NodeId left_child(NodeId id) { return 2 * id; }
inline NodeId right_child(NodeId id) { return 2 * id + 1; }
inline NodeId parent_of(NodeId id) { return id / 2; }

struct DecisionRule {
  int variable = 0;
  bool categorical = false;
  /// Continuous rules send x_j < cutpoint left.
  double cutpoint = 0.5;
  /// Categorical rules send level k left iff bit k is set.
  std::uint64_t left_levels = 0;

  bool goes_left(double value) const {
    if (!categorical) return value < cutpoint;
    return (left_levels >> static_cast<unsigned>(value)) & 1ULL;
  }

  friend bool operator==(const DecisionRule&, const DecisionRule&) = default;
};

/// Leaf-level parameters: scale rho, inner directions omega (q x D, column
/// d is one direction), offsets b and outer weights beta (both length D).
struct LeafParams {
  double rho = 1.0;
  Eigen::MatrixXd omega;
  Eigen::VectorXd offsets;
  Eigen::VectorXd beta;

  /// Zeroed parameters for a leaf with q smoothing inputs and D ridge terms.
  static LeafParams zeros(std::size_t q, std::size_t d);
};

bool operator==(const LeafParams& a, const LeafParams& b);

struct TreeNode {
  bool is_leaf = true;
  DecisionRule rule;  // internal nodes only
  LeafParams leaf;    // leaves only

  friend bool operator==(const TreeNode& a, const TreeNode& b) {
    if (a.is_leaf != b.is_leaf) return false;
    return a.is_leaf ? a.leaf == b.leaf : a.rule == b.rule;
  }
};

/// Binary decision tree over x whose leaves carry ridge-function parameters.
class RidgeTree {
 public:
  RidgeTree() : RidgeTree(LeafParams{}) {}
  explicit RidgeTree(LeafParams root);

  /// Builds a tree from a node table, checking that every internal node has
  /// both children and every other node hangs off an internal parent.
  static RidgeTree from_nodes(std::map<NodeId, TreeNode> nodes);

  const std::map<NodeId, TreeNode>& nodes() const { return nodes_; }
  bool contains(NodeId id) const { return nodes_.contains(id); }
  bool is_leaf(NodeId id) const;
  const TreeNode& node(NodeId id) const;
  const LeafParams& leaf(NodeId id) const;
  LeafParams& leaf(NodeId id);

  std::vector<NodeId> leaves() const;
  /// Internal nodes whose children are both leaves (prune candidates).
  std::vector<NodeId> no_grandchildren() const;
  std::size_t num_leaves() const;
  std::size_t num_nodes() const { return nodes_.size(); }
  int max_depth() const;

  NodeId route(std::span<const double> x) const;

  /// Splits leaf `id` with `rule`. Throws TreeStructureError if `id` is not a leaf.
  void grow(NodeId id, const DecisionRule& rule, LeafParams left, LeafParams right);
  /// Collapses `id` into a leaf. Throws TreeStructureError unless both
  /// children of `id` are leaves.
  void prune(NodeId id, LeafParams merged);

  /// Same topology and rules; leaf parameters ignored.
  bool same_structure(const RidgeTree& other) const;

  friend bool operator==(const RidgeTree&, const RidgeTree&) = default;

 private:
  std::map<NodeId, TreeNode> nodes_;
};

// --- tree mechanics -------------------------------------------------------

/// Region of covariate space reaching a node: open interval (lower, upper)
/// per continuous column and a bitmask of reachable levels per categorical one.
struct CellBounds {
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<std::uint64_t> levels;
};

std::uint64_t all_levels_mask(int num_levels);

CellBounds cell_bounds(const RidgeTree& tree, NodeId id, const VariableInfo& vars);

/// Cell of the left (or right) child of a node whose cell is `parent`.
CellBounds child_cell(const CellBounds& parent, const DecisionRule& rule, bool left);

/// Columns that can still be split inside `cell`.
std::vector<int> splittable_variables(const CellBounds& cell, const VariableInfo& vars);

NodeId assign_leaf(std::span<const double> x, const RidgeTree& tree);

/// Draws a rule for the node `id` conditional on its ancestors. Throws
/// NoSplittableVariable when every column is exhausted.
DecisionRule sample_decision_rule(const RidgeTree& tree, NodeId id, const VariableInfo& vars, Rng& rng);

/// Log probability (density, for continuous cutpoints) of drawing `rule`
/// inside `cell` under sample_decision_rule.
double log_rule_probability(const DecisionRule& rule, const CellBounds& cell, const VariableInfo& vars);

/// Structure and rules from the branching-process prior; leaves get
/// default-constructed parameters.
RidgeTree sample_tree_prior(const Branching& branching, const VariableInfo& vars, Rng& rng);

/// Branching-process term only: sum of log p_split over internal nodes and
/// log(1 - p_split) over leaves.
double log_tree_structure_prior(const RidgeTree& tree, const Branching& branching);

/// Log prior probability that a node is a leaf: log(1 - p_split(depth)),
/// or 0 when nothing inside its cell can be split (the node is forced).
double log_leaf_probability(int depth, const CellBounds& cell, const Branching& branching, const VariableInfo& vars);

/// Log density of a tree under sample_tree_prior: split and leaf terms plus
/// the log probability of every decision rule.
double log_tree_prior(const RidgeTree& tree, const Branching& branching, const VariableInfo& vars);

/// Value-returning grow/prune used by tests and prior simulation.
RidgeTree grow_structure(const RidgeTree& tree, NodeId leaf, const DecisionRule& rule);
RidgeTree prune_structure(const RidgeTree& tree, NodeId node);

/// True when every leaf cell is nonempty (interval and level bookkeeping).
bool has_nonempty_cells(const RidgeTree& tree, const VariableInfo& vars);

}  // namespace ridgebart
