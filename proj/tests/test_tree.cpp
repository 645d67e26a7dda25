#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "lrrf/error.hpp"
#include "lrrf/tree.hpp"
#include "support.hpp"

using namespace lrrf;

namespace {

// Six iris examples; rankings given as position vectors.
Dataset table1() {
  Dataset data({"x1", "x2", "x3", "x4"}, 3);
  const std::vector<std::vector<double>> x{{-0.556, 0.250, -0.864, -0.917},
                                           {0.167, 0.000, 0.186, 0.167},
                                           {0.222, -0.167, 0.424, 0.583},
                                           {0.056, 0.167, 0.492, 0.833},
                                           {-0.611, -1.000, -0.153, -0.250},
                                           {-0.111, -0.167, 0.085, 0.167}};
  const std::vector<std::vector<int>> pi{{1, 2, 3}, {2, 3, 1}, {3, 2, 1},
                                         {3, 1, 2}, {2, 1, 3}, {2, 3, 1}};
  for (std::size_t i = 0; i < x.size(); ++i) data.add(x[i], Ranking::from_positions(pi[i]));
  return data;
}

std::vector<std::size_t> all_rows(const Dataset& d) {
  std::vector<std::size_t> rows(d.size());
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  return rows;
}

double entropy_oracle(const std::vector<int>& classes) {
  if (classes.empty()) return 0.0;
  std::map<int, double> freq;
  for (const int c : classes) freq[c] += 1.0;
  double e = 0.0;
  for (const auto& [c, f] : freq) {
    const double p = f / static_cast<double>(classes.size());
    e += -p * std::log(p) / std::log(2.0);
  }
  return e;
}

double gain_oracle(const Dataset& d, const std::vector<std::size_t>& rows, const SplitRule& rule) {
  std::vector<int> parent, left, right;
  for (const std::size_t r : rows) {
    const int c = d.ranking(r).order().front();
    parent.push_back(c);
    (d.feature(r, rule.attribute) >= rule.threshold ? left : right).push_back(c);
  }
  const double n = static_cast<double>(rows.size());
  return entropy_oracle(parent) - static_cast<double>(left.size()) / n * entropy_oracle(left) -
         static_cast<double>(right.size()) / n * entropy_oracle(right);
}

// Exhaustive scan in (attribute, threshold) order keeping the first strict
// improvement.
std::optional<SplitRule> best_split_oracle(const Dataset& d, const std::vector<std::size_t>& rows,
                                           const std::vector<std::size_t>& attrs) {
  std::optional<SplitRule> best;
  double best_gain = 1e-12;
  for (const std::size_t a : attrs) {
    std::set<double> values;
    for (const std::size_t r : rows) values.insert(d.feature(r, a));
    for (const double t : values) {
      std::size_t left = 0;
      for (const std::size_t r : rows) left += d.feature(r, a) >= t;
      if (left == 0 || left == rows.size()) continue;
      const double g = gain_oracle(d, rows, {a, t});
      if (g > best_gain + (best ? 1e-12 : 0.0)) {
        best = SplitRule{a, t};
        best_gain = g;
      }
    }
  }
  return best;
}

void collect_leaves(const DecisionTree& tree, std::size_t index, int depth,
                    std::vector<std::pair<const LeafNode*, int>>& out) {
  const TreeNode& node = tree.nodes()[index];
  if (const auto* in = std::get_if<InternalNode>(&node)) {
    collect_leaves(tree, in->left, depth + 1, out);
    collect_leaves(tree, in->right, depth + 1, out);
  } else {
    out.emplace_back(&std::get<LeafNode>(node), depth);
  }
}

}  // namespace

TEST(Tlac, TopLabel) {
  EXPECT_EQ(tlac_class(Ranking::from_positions(std::vector<int>{2, 3, 1})).label.index, 3);
  EXPECT_EQ(tlac_class(Ranking::from_positions(std::vector<int>{1, 2, 3})).label.index, 1);
  EXPECT_EQ(tlac_class(parse_ranking("4>3>1", 4)).label.index, 4);
}

TEST(Entropy, Table1Values) {
  const Dataset d = table1();
  EXPECT_NEAR(node_entropy(d, all_rows(d)), entropy_oracle({1, 3, 3, 2, 2, 3}), 1e-12);
  EXPECT_NEAR(node_entropy(d, all_rows(d)), 1.459, 5e-4);
  EXPECT_DOUBLE_EQ(node_entropy(d, std::vector<std::size_t>{1, 2, 5}), 0.0);
  const std::vector<Ranking> half{parse_ranking("1>2", 2), parse_ranking("2>1", 2)};
  EXPECT_DOUBLE_EQ(node_entropy(half), 1.0);
  EXPECT_THROW(node_entropy(std::span<const Ranking>{}), InputError);
}

TEST(InformationGain, Table1Split) {
  const Dataset d = table1();
  const SplitRule rule{3, 0.167};
  EXPECT_NEAR(information_gain(d, all_rows(d), rule), 0.585, 5e-4);
  EXPECT_NEAR(information_gain(d, all_rows(d), rule), gain_oracle(d, all_rows(d), rule), 1e-12);
}

TEST(InformationGain, DegenerateSplits) {
  const Dataset d = table1();
  const auto rows = all_rows(d);
  EXPECT_NEAR(information_gain(d, rows, {0, -10.0}), 0.0, 1e-12);
  // x4 >= 0.5 isolates rows 3 and 4 but they hold two classes
  const double g = information_gain(d, rows, {3, 0.5});
  EXPECT_LE(g, node_entropy(d, rows));
}

TEST(InformationGain, MatchesOracleOnRandomNodes) {
  Rng rng(77);
  for (int trial = 0; trial < 1000; ++trial) {
    const int m = 2 + static_cast<int>(rng.uniform_index(5));
    const std::size_t d = 1 + rng.uniform_index(5);
    const Dataset data = lrrf::testing::random_dataset(rng, 2 + rng.uniform_index(40), d, m);
    std::vector<std::size_t> rows;
    const std::size_t n = 1 + rng.uniform_index(data.size() * 2);
    for (std::size_t i = 0; i < n; ++i) rows.push_back(rng.uniform_index(data.size()));
    const std::size_t a = rng.uniform_index(d);
    const SplitRule rule{a, data.feature(rows[rng.uniform_index(rows.size())], a)};
    ASSERT_NEAR(information_gain(data, rows, rule), gain_oracle(data, rows, rule), 1e-9);
  }
}

TEST(BestSplit, Table1SingleAttribute) {
  const Dataset d = table1();
  const std::vector<std::size_t> attrs{3};
  const auto got = find_best_split(d, all_rows(d), attrs);
  const auto want = best_split_oracle(d, all_rows(d), attrs);
  ASSERT_TRUE(got && want);
  EXPECT_EQ(*got, *want);
}

TEST(BestSplit, NoneForPureOrConstantNodes) {
  const Dataset d = table1();
  const std::vector<std::size_t> attrs{0, 1, 2, 3};
  EXPECT_FALSE(find_best_split(d, std::vector<std::size_t>{1, 2, 5}, attrs));
  EXPECT_FALSE(find_best_split(d, std::vector<std::size_t>{0, 0, 0}, attrs));
  Dataset same({"x"}, 2);
  same.add(std::vector<double>{1.0}, parse_ranking("1>2", 2));
  same.add(std::vector<double>{1.0}, parse_ranking("2>1", 2));
  EXPECT_FALSE(find_best_split(same, all_rows(same), std::vector<std::size_t>{0}));
}

TEST(BestSplit, MatchesExhaustiveOracle) {
  Rng rng(3);
  for (int trial = 0; trial < 400; ++trial) {
    const Dataset data = lrrf::testing::random_dataset(rng, 3 + rng.uniform_index(30), 4, 3);
    std::vector<std::size_t> attrs;
    for (std::size_t a = 0; a < 4; ++a) {
      if (rng.uniform_index(2) == 0) attrs.push_back(a);
    }
    if (attrs.empty()) attrs.push_back(2);
    const auto rows = all_rows(data);
    const auto got = find_best_split(data, rows, attrs);
    const auto want = best_split_oracle(data, rows, attrs);
    ASSERT_EQ(got.has_value(), want.has_value());
    if (got) {
      EXPECT_NEAR(information_gain(data, rows, *got), gain_oracle(data, rows, *want), 1e-12);
      EXPECT_EQ(*got, *want);
    }
  }
}

TEST(BuildTree, SingleInstanceIsLeaf) {
  Dataset d({"x"}, 3);
  d.add(std::vector<double>{0.5}, parse_ranking("2>1>3", 3));
  Rng rng(1);
  const DecisionTree t = build_tree(d, TreeConfig{}, rng);
  EXPECT_EQ(t.nodes().size(), 1u);
  EXPECT_EQ(t.depth(), 1);
  EXPECT_EQ(leaf_neighbors(t, std::vector<double>{9.0}).size(), 1u);
}

TEST(BuildTree, DepthOneKeepsEverything) {
  const Dataset d = table1();
  TreeConfig c;
  c.max_depth = 1;
  Rng rng(1);
  const DecisionTree t = build_tree(d, c, rng);
  EXPECT_EQ(t.leaf_count(), 1u);
  EXPECT_EQ(leaf_neighbors(t, d.features(0)).size(), d.size());
}

TEST(BuildTree, SeparableToyGivesTwoPureLeaves) {
  Dataset d({"x1", "x2"}, 2);
  Rng noise(4);
  for (int i = 0; i < 40; ++i) {
    const double x1 = (i % 2 ? 1.0 : -1.0) * (0.1 + noise.uniform_real());
    const std::vector<double> x{x1, noise.uniform_real()};
    d.add(x, parse_ranking(x1 >= 0 ? "1>2" : "2>1", 2));
  }
  TreeConfig c;
  c.features_per_node = 2;
  Rng rng(8);
  const DecisionTree t = build_tree(d, c, rng);
  EXPECT_EQ(t.depth(), 2);
  EXPECT_EQ(t.leaf_count(), 2u);
  for (std::size_t i = 0; i < d.size(); ++i) {
    for (const Ranking& r : leaf_neighbors(t, d.features(i))) EXPECT_EQ(r, d.ranking(i));
  }
}

TEST(BuildTree, StructuralInvariants) {
  Rng rng(21);
  for (int trial = 0; trial < 60; ++trial) {
    const Dataset data = lrrf::testing::random_dataset(rng, 5 + rng.uniform_index(80), 3, 4);
    TreeConfig c;
    c.max_depth = 1 + static_cast<int>(rng.uniform_index(6));
    c.min_node_size = 1 + rng.uniform_index(4);
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < data.size(); ++i) rows.push_back(rng.uniform_index(data.size()));
    const DecisionTree t = build_tree(data, rows, c, rng);
    EXPECT_LE(t.depth(), c.max_depth);

    std::vector<std::pair<const LeafNode*, int>> leaves;
    collect_leaves(t, 0, 1, leaves);
    std::multiset<std::string> stored, trained;
    for (const auto& [leaf, depth] : leaves) {
      ASSERT_FALSE(leaf->rankings.empty());
      EXPECT_LE(depth, c.max_depth);
      for (const Ranking& r : leaf->rankings) stored.insert(format_ranking(r));
    }
    for (const std::size_t r : rows) trained.insert(format_ranking(data.ranking(r)));
    EXPECT_EQ(stored, trained);

    for (const std::size_t r : rows) {
      const auto nb = leaf_neighbors(t, data.features(r));
      EXPECT_NE(std::find(nb.begin(), nb.end(), data.ranking(r)), nb.end());
    }
  }
}

TEST(BuildTree, DeterministicForSeed) {
  Rng gen(5);
  const Dataset data = lrrf::testing::random_dataset(gen, 120, 6, 4);
  Rng a(99), b(99);
  EXPECT_EQ(build_tree(data, TreeConfig{}, a), build_tree(data, TreeConfig{}, b));
}

TEST(BuildTree, RejectsBadConfig) {
  const Dataset d = table1();
  Rng rng(1);
  TreeConfig c;
  c.max_depth = 0;
  EXPECT_THROW(build_tree(d, c, rng), InputError);
  c = {};
  c.features_per_node = 5;
  EXPECT_THROW(build_tree(d, c, rng), InputError);
  EXPECT_THROW(build_tree(d, std::vector<std::size_t>{}, TreeConfig{}, rng), InputError);
}

TEST(BuildTree, DefaultFeaturesPerNode) {
  EXPECT_EQ(default_features_per_node(1), 1u);
  EXPECT_EQ(default_features_per_node(4), 3u);
  EXPECT_EQ(default_features_per_node(7), 3u);
  EXPECT_EQ(default_features_per_node(8), 4u);
  EXPECT_EQ(default_features_per_node(13), 4u);
}

TEST(Routing, ThresholdEqualityGoesLeft) {
  std::vector<TreeNode> nodes;
  nodes.emplace_back(InternalNode{{0, 0.5}, 1, 2});
  nodes.emplace_back(LeafNode{{parse_ranking("1>2", 2)}});
  nodes.emplace_back(LeafNode{{parse_ranking("2>1", 2)}});
  const DecisionTree t(1, 2, std::move(nodes));
  EXPECT_EQ(t.route(std::vector<double>{0.5}), 1u);
  EXPECT_EQ(t.route(std::vector<double>{0.4999}), 2u);
  EXPECT_EQ(format_ranking(tree_predict(t, std::vector<double>{0.5})), "1>2");
  EXPECT_THROW(t.route(std::vector<double>{0.5, 1.0}), InputError);
}

TEST(Routing, MalformedTreesRejected) {
  auto leaf = [] { return TreeNode{LeafNode{{parse_ranking("1>2", 2)}}}; };
  EXPECT_THROW(DecisionTree(1, 2, {}), InputError);
  EXPECT_THROW(DecisionTree(1, 2, {TreeNode{InternalNode{{0, 0.0}, 1, 1}}, leaf()}), InputError);
  EXPECT_THROW(DecisionTree(1, 2, {TreeNode{InternalNode{{3, 0.0}, 1, 2}}, leaf(), leaf()}),
               InputError);
  EXPECT_THROW(DecisionTree(1, 2, {TreeNode{LeafNode{}}}), InputError);
  EXPECT_THROW(DecisionTree(1, 3, {leaf()}), InputError);
}

TEST(TreePredict, LeafAggregation) {
  std::vector<TreeNode> one{LeafNode{{parse_ranking("1>2>3", 3), parse_ranking("1>2>3", 3)}}};
  EXPECT_EQ(format_ranking(tree_predict(DecisionTree(1, 3, one), std::vector<double>{0.0})),
            "1>2>3");
  std::vector<TreeNode> partial{LeafNode{{parse_ranking("1>3", 3), parse_ranking("1>2", 3)}}};
  const Ranking p = tree_predict(DecisionTree(1, 3, partial), std::vector<double>{0.0});
  EXPECT_TRUE(p.complete());
  EXPECT_EQ(p.top().index, 1);
}
