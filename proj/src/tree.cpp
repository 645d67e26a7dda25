#include "lrrf/tree.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>

#include "lrrf/error.hpp"

namespace lrrf {
namespace {

// Gains closer than this are treated as equal.
constexpr double kGainTolerance = 1e-12;

double entropy_of_counts(std::span<const std::size_t> counts, std::size_t total) {
  if (total == 0) return 0.0;
  const double n = static_cast<double>(total);
  double e = 0.0;
  for (const std::size_t c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / n;
    e -= p * std::log2(p);
  }
  return e;
}

std::size_t class_index(const Ranking& r) {
  return static_cast<std::size_t>(tlac_class(r).label.index - 1);
}

std::vector<std::size_t> class_counts(const Dataset& data,
                                      std::span<const std::size_t> rows) {
  std::vector<std::size_t> counts(static_cast<std::size_t>(data.label_count()), 0);
  for (const std::size_t row : rows) ++counts[class_index(data.ranking(row))];
  return counts;
}

void validate(const TreeConfig& config, std::size_t attribute_count) {
  if (config.max_depth < 1) throw InputError("max depth must be at least 1");
  if (!(config.entropy_threshold >= 0.0)) {
    throw InputError("entropy threshold must be non-negative");
  }
  if (config.min_node_size < 1) throw InputError("min node size must be at least 1");
  if (config.features_per_node &&
      (*config.features_per_node < 1 || *config.features_per_node > attribute_count)) {
    throw InputError("features per node must lie in [1, " +
                     std::to_string(attribute_count) + "]");
  }
}

class TreeBuilder {
 public:
  TreeBuilder(const Dataset& data, const TreeConfig& config, Rng& rng)
      : data_(data),
        config_(config),
        rng_(rng),
        features_per_node_(config.features_per_node.value_or(
            default_features_per_node(data.attribute_count()))) {}

  std::vector<TreeNode> build(std::vector<std::size_t> rows) {
    grow(std::move(rows), 1);
    return std::move(nodes_);
  }

 private:
  std::size_t grow(std::vector<std::size_t> rows, int depth) {
    const std::size_t index = nodes_.size();
    nodes_.emplace_back(LeafNode{});

    std::optional<SplitRule> rule;
    const bool stop = depth >= config_.max_depth || rows.size() < config_.min_node_size ||
                      node_entropy(data_, rows) <= config_.entropy_threshold;
    if (!stop) rule = find_best_split(data_, rows, draw_attributes());

    if (!rule) {
      LeafNode leaf;
      leaf.rankings.reserve(rows.size());
      for (const std::size_t row : rows) leaf.rankings.push_back(data_.ranking(row));
      nodes_[index] = std::move(leaf);
      return index;
    }

    std::vector<std::size_t> left_rows;
    std::vector<std::size_t> right_rows;
    for (const std::size_t row : rows) {
      (rule->goes_left(data_.features(row)) ? left_rows : right_rows).push_back(row);
    }
    rows = {};
    const std::size_t left = grow(std::move(left_rows), depth + 1);
    const std::size_t right = grow(std::move(right_rows), depth + 1);
    nodes_[index] = InternalNode{*rule, left, right};
    return index;
  }

  std::vector<std::size_t> draw_attributes() {
    const std::size_t d = data_.attribute_count();
    std::vector<std::size_t> pool(d);
    std::iota(pool.begin(), pool.end(), std::size_t{0});
    for (std::size_t i = 0; i < features_per_node_; ++i) {
      std::swap(pool[i], pool[i + rng_.uniform_index(d - i)]);
    }
    pool.resize(features_per_node_);
    std::sort(pool.begin(), pool.end());
    return pool;
  }

  const Dataset& data_;
  const TreeConfig& config_;
  Rng& rng_;
  std::size_t features_per_node_;
  std::vector<TreeNode> nodes_;
};

}  // namespace

TlacClass tlac_class(const Ranking& ranking) { return TlacClass{ranking.top()}; }

std::size_t default_features_per_node(std::size_t attribute_count) {
  if (attribute_count == 0) throw InputError("no attributes");
  return static_cast<std::size_t>(std::bit_width(attribute_count));
}

double node_entropy(std::span<const Ranking> rankings) {
  if (rankings.empty()) throw InputError("entropy of an empty node");
  std::vector<std::size_t> counts(static_cast<std::size_t>(rankings.front().label_count()), 0);
  for (const Ranking& r : rankings) {
    const std::size_t c = class_index(r);
    if (c >= counts.size()) throw InputError("rankings over different label counts");
    ++counts[c];
  }
  return entropy_of_counts(counts, rankings.size());
}

double node_entropy(const Dataset& data, std::span<const std::size_t> rows) {
  if (rows.empty()) throw InputError("entropy of an empty node");
  return entropy_of_counts(class_counts(data, rows), rows.size());
}

double information_gain(const Dataset& data, std::span<const std::size_t> rows,
                        const SplitRule& rule) {
  if (rows.empty()) throw InputError("information gain of an empty node");
  if (rule.attribute >= data.attribute_count()) throw InputError("split attribute out of range");
  const std::size_t m = static_cast<std::size_t>(data.label_count());
  std::vector<std::size_t> left(m, 0);
  std::vector<std::size_t> right(m, 0);
  std::size_t n_left = 0;
  for (const std::size_t row : rows) {
    const std::size_t c = class_index(data.ranking(row));
    if (rule.goes_left(data.features(row))) {
      ++left[c];
      ++n_left;
    } else {
      ++right[c];
    }
  }
  const std::size_t n_right = rows.size() - n_left;
  const double n = static_cast<double>(rows.size());
  return node_entropy(data, rows) -
         static_cast<double>(n_left) / n * entropy_of_counts(left, n_left) -
         static_cast<double>(n_right) / n * entropy_of_counts(right, n_right);
}

std::optional<SplitRule> find_best_split(
    const Dataset& data, std::span<const std::size_t> rows,
    std::span<const std::size_t> candidate_attributes) {
  if (rows.size() < 2) return std::nullopt;
  const std::vector<std::size_t> parent = class_counts(data, rows);
  const double parent_entropy = entropy_of_counts(parent, rows.size());
  if (parent_entropy <= 0.0) return std::nullopt;

  std::vector<std::size_t> attributes(candidate_attributes.begin(), candidate_attributes.end());
  std::sort(attributes.begin(), attributes.end());
  attributes.erase(std::unique(attributes.begin(), attributes.end()), attributes.end());

  const std::size_t n = rows.size();
  const double total = static_cast<double>(n);
  std::vector<std::pair<double, std::size_t>> items(n);
  std::vector<std::size_t> below(parent.size());
  std::vector<std::size_t> above(parent.size());

  std::optional<SplitRule> best;
  double best_gain = 0.0;
  for (const std::size_t attribute : attributes) {
    if (attribute >= data.attribute_count()) throw InputError("candidate attribute out of range");
    for (std::size_t i = 0; i < n; ++i) {
      items[i] = {data.feature(rows[i], attribute), class_index(data.ranking(rows[i]))};
    }
    std::sort(items.begin(), items.end());
    std::fill(below.begin(), below.end(), 0);

    // Threshold items[i].first sends items[0, i) right and items[i, n) left.
    for (std::size_t i = 1; i < n; ++i) {
      ++below[items[i - 1].second];
      if (items[i].first == items[i - 1].first) continue;
      for (std::size_t c = 0; c < parent.size(); ++c) above[c] = parent[c] - below[c];
      const double gain = parent_entropy -
                          static_cast<double>(n - i) / total * entropy_of_counts(above, n - i) -
                          static_cast<double>(i) / total * entropy_of_counts(below, i);
      if (gain > kGainTolerance && (!best || gain > best_gain + kGainTolerance)) {
        best = SplitRule{attribute, items[i].first};
        best_gain = gain;
      }
    }
  }
  return best;
}

DecisionTree::DecisionTree(std::size_t attribute_count, int label_count,
                           std::vector<TreeNode> nodes)
    : attribute_count_(attribute_count), label_count_(label_count), nodes_(std::move(nodes)) {
  if (nodes_.empty()) throw InputError("tree has no nodes");
  std::vector<bool> seen(nodes_.size(), false);
  std::vector<std::size_t> stack{0};
  while (!stack.empty()) {
    const std::size_t index = stack.back();
    stack.pop_back();
    if (index >= nodes_.size()) throw InputError("tree child index out of range");
    if (seen[index]) throw InputError("tree node reached twice");
    seen[index] = true;
    if (const auto* internal = std::get_if<InternalNode>(&nodes_[index])) {
      if (internal->rule.attribute >= attribute_count_) {
        throw InputError("split attribute out of range");
      }
      stack.push_back(internal->right);
      stack.push_back(internal->left);
    } else {
      const auto& leaf = std::get<LeafNode>(nodes_[index]);
      if (leaf.rankings.empty()) throw InputError("empty leaf");
      for (const Ranking& r : leaf.rankings) {
        if (r.label_count() != label_count_) throw InputError("leaf ranking over wrong label count");
      }
    }
  }
  if (std::find(seen.begin(), seen.end(), false) != seen.end()) {
    throw InputError("tree has unreachable nodes");
  }
}

int DecisionTree::depth() const {
  int deepest = 0;
  std::vector<std::pair<std::size_t, int>> stack{{0, 1}};
  while (!stack.empty()) {
    const auto [index, depth] = stack.back();
    stack.pop_back();
    if (const auto* internal = std::get_if<InternalNode>(&nodes_[index])) {
      stack.emplace_back(internal->left, depth + 1);
      stack.emplace_back(internal->right, depth + 1);
    } else {
      deepest = std::max(deepest, depth);
    }
  }
  return deepest;
}

std::size_t DecisionTree::leaf_count() const {
  return static_cast<std::size_t>(std::count_if(nodes_.begin(), nodes_.end(), [](const TreeNode& node) {
    return std::holds_alternative<LeafNode>(node);
  }));
}

std::size_t DecisionTree::route(std::span<const double> x) const {
  if (x.size() != attribute_count_) {
    throw InputError("expected " + std::to_string(attribute_count_) + " features, got " +
                     std::to_string(x.size()));
  }
  std::size_t index = 0;
  while (const auto* internal = std::get_if<InternalNode>(&nodes_[index])) {
    index = internal->rule.goes_left(x) ? internal->left : internal->right;
  }
  return index;
}

DecisionTree build_tree(const Dataset& data, std::span<const std::size_t> rows,
                        const TreeConfig& config, Rng& rng) {
  if (rows.empty()) throw InputError("cannot grow a tree on zero instances");
  validate(config, data.attribute_count());
  for (const std::size_t row : rows) {
    if (row >= data.size()) throw InputError("row index out of range");
  }
  TreeBuilder builder(data, config, rng);
  return DecisionTree(data.attribute_count(), data.label_count(),
                      builder.build(std::vector<std::size_t>(rows.begin(), rows.end())));
}

DecisionTree build_tree(const Dataset& data, const TreeConfig& config, Rng& rng) {
  std::vector<std::size_t> rows(data.size());
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  return build_tree(data, rows, config, rng);
}

std::span<const Ranking> leaf_neighbors(const DecisionTree& tree, std::span<const double> x) {
  return std::get<LeafNode>(tree.nodes()[tree.route(x)]).rankings;
}

Ranking tree_predict(const DecisionTree& tree, std::span<const double> x, TieBreakPolicy tie) {
  return generalized_borda_aggregate(leaf_neighbors(tree, x), tree.label_count(), tie);
}

}  // namespace lrrf
