#include <gtest/gtest.h>

#include <vector>

#include "lrrf/error.hpp"
#include "lrrf/forest.hpp"
#include "support.hpp"

using namespace lrrf;

namespace {

Dataset sample(std::uint64_t seed, std::size_t n = 90) {
  Rng rng(seed);
  return lrrf::testing::random_dataset(rng, n, 5, 4);
}

std::vector<std::vector<double>> random_inputs(Rng& rng, std::size_t n, std::size_t d) {
  std::vector<std::vector<double>> xs(n, std::vector<double>(d));
  for (auto& x : xs) {
    for (double& v : x) v = rng.uniform_real() - 0.5;
  }
  return xs;
}

}  // namespace

TEST(Bootstrap, SizeAndRange) {
  Rng rng(1);
  const auto rows = bootstrap_indices(10, 25, rng);
  EXPECT_EQ(rows.size(), 25u);
  for (const auto r : rows) EXPECT_LT(r, 10u);
  EXPECT_THROW(bootstrap_indices(0, 3, rng), InputError);
}

TEST(Bootstrap, RoughlyUniform) {
  Rng rng(2);
  std::vector<int> hits(5, 0);
  for (const auto r : bootstrap_indices(5, 50000, rng)) ++hits[r];
  for (const int h : hits) EXPECT_NEAR(h, 10000, 400);
}

TEST(Bootstrap, SampleCopiesRows) {
  const Dataset d = sample(3, 20);
  Rng a(4), b(4);
  const Dataset s = bootstrap_sample(d, 20, a);
  const auto rows = bootstrap_indices(20, 20, b);
  for (std::size_t i = 0; i < rows.size(); ++i) EXPECT_EQ(s.ranking(i), d.ranking(rows[i]));
}

TEST(Forest, SingleTreeEqualsTreePredict) {
  const Dataset d = sample(5);
  ForestConfig c;
  c.tree_count = 1;
  c.seed = 17;
  const Forest f = train(d, c, 1);
  ASSERT_EQ(f.trees().size(), 1u);
  Rng rng(6);
  for (const auto& x : random_inputs(rng, 50, 5)) {
    EXPECT_EQ(predict(f, x), tree_predict(f.trees()[0], x));
  }
}

TEST(Forest, TreeUsesItsOwnStream) {
  const Dataset d = sample(7);
  ForestConfig c;
  c.tree_count = 3;
  c.seed = 123;
  const Forest f = train(d, c, 1);
  TreeConfig tc = c.tree;
  tc.features_per_node = default_features_per_node(d.attribute_count());
  Rng rng(derive_seed(123, 2));
  const auto rows = bootstrap_indices(d.size(), d.size(), rng);
  EXPECT_EQ(f.trees()[2], build_tree(d, rows, tc, rng));
}

TEST(Forest, UnanimousTreesGiveTheirRanking) {
  Dataset d({"x"}, 3);
  for (int i = 0; i < 10; ++i) d.add(std::vector<double>{i * 0.1}, parse_ranking("3>1>2", 3));
  const Forest f = train(d, ForestConfig{}, 2);
  EXPECT_EQ(format_ranking(predict(f, std::vector<double>{0.3})), "3>1>2");
}

TEST(Forest, PredictionsAreComplete) {
  const Dataset clean = sample(8);
  std::vector<Ranking> partial;
  Rng rng(9);
  for (std::size_t i = 0; i < clean.size(); ++i) partial.push_back(lrrf::testing::random_partial(rng, 4));
  const Forest f = train(clean.with_rankings(partial), ForestConfig{}, 2);
  for (const auto& x : random_inputs(rng, 40, 5)) EXPECT_TRUE(predict(f, x).complete());
}

TEST(Forest, ThreadCountDoesNotChangeResult) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Dataset d = sample(100 + seed);
    ForestConfig c;
    c.tree_count = 12;
    c.seed = seed;
    const Forest one = train(d, c, 1);
    const Forest many = train(d, c, 8);
    EXPECT_EQ(one, many);
    Rng rng(seed);
    const auto xs = random_inputs(rng, 30, 5);
    EXPECT_EQ(predict_batch(one, xs, 1), predict_batch(many, xs, 8));
  }
}

TEST(Forest, BatchMatchesSequential) {
  const Dataset d = sample(11);
  const Forest f = train(d, ForestConfig{}, 3);
  Rng rng(12);
  const auto xs = random_inputs(rng, 100, 5);
  const auto batch = predict_batch(f, xs, 4);
  ASSERT_EQ(batch.size(), xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) EXPECT_EQ(batch[i], predict(f, xs[i]));
  const std::vector<std::vector<double>> one{xs[0]};
  EXPECT_EQ(predict_batch(f, one).front(), predict(f, xs[0]));
  EXPECT_EQ(predict_batch(f, d, 2).size(), d.size());
}

TEST(Forest, Errors) {
  const Dataset d = sample(13);
  ForestConfig c;
  c.tree_count = 0;
  EXPECT_THROW(train(d, c), InputError);
  const Forest f = train(d, ForestConfig{}, 1);
  EXPECT_THROW(predict(f, std::vector<double>{1.0, 2.0}), InputError);
  EXPECT_THROW(train(Dataset({"x"}, 3), ForestConfig{}), InputError);
}

TEST(Forest, ConfigRecordsResolvedFeatureCount) {
  const Dataset d = sample(14);
  const Forest f = train(d, ForestConfig{}, 1);
  EXPECT_EQ(f.config().tree.features_per_node, default_features_per_node(5));
  EXPECT_EQ(f.trees().size(), 50u);
}
