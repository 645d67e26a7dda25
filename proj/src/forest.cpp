#include "lrrf/forest.hpp"

#include <optional>
#include <string>

#include "lrrf/error.hpp"
#include "lrrf/parallel.hpp"

namespace lrrf {
namespace {

void check_dimension(const Forest& forest, std::size_t size) {
  if (size != forest.attribute_count()) {
    throw InputError("expected " + std::to_string(forest.attribute_count()) +
                     " features, got " + std::to_string(size));
  }
}

template <class RowFn>
std::vector<Ranking> predict_rows(const Forest& forest, std::size_t n, unsigned threads,
                                  RowFn row) {
  for (std::size_t i = 0; i < n; ++i) check_dimension(forest, row(i).size());
  std::vector<std::optional<Ranking>> slots(n);
  parallel_for(n, threads, [&](std::size_t i) { slots[i] = predict(forest, row(i)); });
  std::vector<Ranking> out;
  out.reserve(n);
  for (auto& slot : slots) out.push_back(std::move(*slot));
  return out;
}

}  // namespace

Forest::Forest(ForestConfig config, std::vector<std::string> attribute_names, int label_count,
               std::vector<DecisionTree> trees)
    : config_(std::move(config)),
      names_(std::move(attribute_names)),
      label_count_(label_count),
      trees_(std::move(trees)) {
  if (trees_.empty()) throw InputError("a forest needs at least one tree");
  if (trees_.size() != config_.tree_count) {
    throw InputError("forest holds " + std::to_string(trees_.size()) + " trees but config says " +
                     std::to_string(config_.tree_count));
  }
  for (const DecisionTree& tree : trees_) {
    if (tree.attribute_count() != names_.size() || tree.label_count() != label_count_) {
      throw InputError("tree dimensions do not match the forest");
    }
  }
}

std::vector<std::size_t> bootstrap_indices(std::size_t population, std::size_t n, Rng& rng) {
  if (population == 0) throw InputError("cannot bootstrap an empty dataset");
  std::vector<std::size_t> rows(n);
  for (std::size_t& row : rows) row = rng.uniform_index(population);
  return rows;
}

Dataset bootstrap_sample(const Dataset& data, std::size_t n, Rng& rng) {
  return data.subset(bootstrap_indices(data.size(), n, rng));
}

Forest train(const Dataset& data, const ForestConfig& config, unsigned threads) {
  if (data.empty()) throw InputError("cannot train on an empty dataset");
  if (config.tree_count < 1) throw InputError("a forest needs at least one tree");

  ForestConfig resolved = config;
  if (!resolved.tree.features_per_node) {
    resolved.tree.features_per_node = default_features_per_node(data.attribute_count());
  }

  std::vector<std::optional<DecisionTree>> slots(resolved.tree_count);
  parallel_for(resolved.tree_count, threads, [&](std::size_t i) {
    Rng rng(derive_seed(resolved.seed, i));
    const std::vector<std::size_t> rows = bootstrap_indices(data.size(), data.size(), rng);
    slots[i] = build_tree(data, rows, resolved.tree, rng);
  });

  std::vector<DecisionTree> trees;
  trees.reserve(slots.size());
  for (auto& slot : slots) trees.push_back(std::move(*slot));
  return Forest(std::move(resolved), data.attribute_names(), data.label_count(), std::move(trees));
}

Ranking predict(const Forest& forest, std::span<const double> x) {
  check_dimension(forest, x.size());
  std::vector<Ranking> votes;
  votes.reserve(forest.trees().size());
  for (const DecisionTree& tree : forest.trees()) {
    votes.push_back(tree_predict(tree, x, forest.config().tie));
  }
  return borda_aggregate(votes, forest.config().tie);
}

std::vector<Ranking> predict_batch(const Forest& forest,
                                   std::span<const std::vector<double>> inputs, unsigned threads) {
  return predict_rows(forest, inputs.size(), threads,
                      [&](std::size_t i) { return std::span<const double>(inputs[i]); });
}

std::vector<Ranking> predict_batch(const Forest& forest, const Dataset& data, unsigned threads) {
  return predict_rows(forest, data.size(), threads,
                      [&](std::size_t i) { return data.features(i); });
}

}  // namespace lrrf
