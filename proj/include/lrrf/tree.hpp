#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "lrrf/aggregation.hpp"
#include "lrrf/dataset.hpp"
#include "lrrf/random.hpp"
#include "lrrf/ranking.hpp"

namespace lrrf {

// Top Label As Class: the class of a ranking is its most preferred observed
// label.
struct TlacClass {
  LabelId label;

  friend bool operator==(const TlacClass&, const TlacClass&) = default;
};

TlacClass tlac_class(const Ranking& ranking);

// Instances with x[attribute] >= threshold go left, all others right.
struct SplitRule {
  std::size_t attribute = 0;
  double threshold = 0.0;

  bool goes_left(std::span<const double> x) const {
    return x[attribute] >= threshold;
  }

  friend bool operator==(const SplitRule&, const SplitRule&) = default;
};

struct TreeConfig {
  // Nodes at this depth become leaves; the root has depth 1.
  int max_depth = 8;
  // A node whose TLAC entropy (bits) is <= this becomes a leaf.
  double entropy_threshold = 0.0;
  // Attributes drawn per node; floor(log2 d) + 1 when unset.
  std::optional<std::size_t> features_per_node;
  // Nodes with fewer instances become leaves.
  std::size_t min_node_size = 1;

  friend bool operator==(const TreeConfig&, const TreeConfig&) = default;
};

// floor(log2 d) + 1
std::size_t default_features_per_node(std::size_t attribute_count);

// Entropy in bits of the TLAC class distribution. Throws on empty input.
double node_entropy(std::span<const Ranking> rankings);
double node_entropy(const Dataset& data, std::span<const std::size_t> rows);

// E(parent) - sum over children of |child|/|parent| * E(child). An empty
// child contributes nothing.
double information_gain(const Dataset& data, std::span<const std::size_t> rows,
                        const SplitRule& rule);

// Best split over `candidate_attributes`, scanning every distinct value of
// each attribute among `rows` as a threshold. Splits leaving a child empty are
// skipped. Equal gains prefer the lower attribute, then the lower threshold.
// Returns nullopt when no split has positive gain.
std::optional<SplitRule> find_best_split(
    const Dataset& data, std::span<const std::size_t> rows,
    std::span<const std::size_t> candidate_attributes);

struct InternalNode {
  SplitRule rule;
  std::size_t left = 0;
  std::size_t right = 0;

  friend bool operator==(const InternalNode&, const InternalNode&) = default;
};

struct LeafNode {
  std::vector<Ranking> rankings;  // training rankings routed to this leaf

  friend bool operator==(const LeafNode&, const LeafNode&) = default;
};

using TreeNode = std::variant<InternalNode, LeafNode>;

// An unpruned binary decision tree. Nodes are stored in preorder with the
// root at index 0; a built tree is never modified.
class DecisionTree {
 public:
  // Validates the node graph: children indices in range, every node reached
  // exactly once from the root, non-empty leaves over `label_count` labels,
  // split attributes below `attribute_count`.
  DecisionTree(std::size_t attribute_count, int label_count,
               std::vector<TreeNode> nodes);

  std::size_t attribute_count() const noexcept { return attribute_count_; }
  int label_count() const noexcept { return label_count_; }
  std::span<const TreeNode> nodes() const noexcept { return nodes_; }
  const TreeNode& root() const { return nodes_.front(); }

  // Depth of the deepest leaf; a lone root leaf has depth 1.
  int depth() const;
  std::size_t leaf_count() const;

  // Index of the leaf reached by x.
  std::size_t route(std::span<const double> x) const;

  friend bool operator==(const DecisionTree&, const DecisionTree&) = default;

 private:
  std::size_t attribute_count_;
  int label_count_;
  std::vector<TreeNode> nodes_;
};

// Grows a tree on the given rows (repeats allowed, e.g. a bootstrap
// replicate). At every node a fresh set of attributes is drawn without
// replacement from `rng`.
DecisionTree build_tree(const Dataset& data, std::span<const std::size_t> rows,
                        const TreeConfig& config, Rng& rng);
DecisionTree build_tree(const Dataset& data, const TreeConfig& config, Rng& rng);

// Training rankings stored in the leaf that x reaches.
std::span<const Ranking> leaf_neighbors(const DecisionTree& tree,
                                        std::span<const double> x);

// Generalized Borda aggregation of the leaf's rankings.
Ranking tree_predict(const DecisionTree& tree, std::span<const double> x,
                     TieBreakPolicy tie = {});

}  // namespace lrrf
