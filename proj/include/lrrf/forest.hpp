#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "lrrf/aggregation.hpp"
#include "lrrf/dataset.hpp"
#include "lrrf/random.hpp"
#include "lrrf/tree.hpp"

namespace lrrf {

struct ForestConfig {
  std::size_t tree_count = 50;
  TreeConfig tree{};
  // Tree i draws from the stream derive_seed(seed, i).
  std::uint64_t seed = 0;
  TieBreakPolicy tie{};

  friend bool operator==(const ForestConfig&, const ForestConfig&) = default;
};

class Forest {
 public:
  Forest(ForestConfig config, std::vector<std::string> attribute_names, int label_count,
         std::vector<DecisionTree> trees);

  const ForestConfig& config() const noexcept { return config_; }
  std::size_t attribute_count() const noexcept { return names_.size(); }
  const std::vector<std::string>& attribute_names() const noexcept { return names_; }
  int label_count() const noexcept { return label_count_; }
  std::span<const DecisionTree> trees() const noexcept { return trees_; }

  friend bool operator==(const Forest&, const Forest&) = default;

 private:
  ForestConfig config_;
  std::vector<std::string> names_;
  int label_count_;
  std::vector<DecisionTree> trees_;
};

// n row indices drawn uniformly with replacement from [0, population).
std::vector<std::size_t> bootstrap_indices(std::size_t population, std::size_t n, Rng& rng);

// Bootstrap replicate of n instances.
Dataset bootstrap_sample(const Dataset& data, std::size_t n, Rng& rng);

// Trains tree_count trees, each on its own bootstrap replicate of size
// |data|. Trees are independent tasks spread over `threads` workers (0 = all
// hardware threads); the result does not depend on the thread count.
Forest train(const Dataset& data, const ForestConfig& config, unsigned threads = 0);

// Two-step aggregation: each tree aggregates its leaf's rankings, then the
// per-tree rankings are Borda-aggregated.
Ranking predict(const Forest& forest, std::span<const double> x);

std::vector<Ranking> predict_batch(const Forest& forest,
                                   std::span<const std::vector<double>> inputs,
                                   unsigned threads = 0);
std::vector<Ranking> predict_batch(const Forest& forest, const Dataset& data,
                                   unsigned threads = 0);

}  // namespace lrrf
