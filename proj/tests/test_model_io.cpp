#include <gtest/gtest.h>

#include <sstream>
#include <string>

#include "lrrf/error.hpp"
#include "lrrf/model_io.hpp"
#include "support.hpp"

using namespace lrrf;

namespace {

Forest trained(std::size_t trees, std::uint64_t seed) {
  Rng rng(seed);
  Dataset d = lrrf::testing::random_dataset(rng, 80, 4, 4);
  std::vector<Ranking> mixed;
  for (std::size_t i = 0; i < d.size(); ++i) {
    mixed.push_back(i % 3 ? d.ranking(i) : lrrf::testing::random_partial(rng, 4));
  }
  ForestConfig c;
  c.tree_count = trees;
  c.seed = seed;
  c.tie = TieBreakPolicy::seeded_random(seed + 1);
  return train(d.with_rankings(mixed), c, 2);
}

std::string saved(const Forest& f) {
  std::ostringstream out;
  write_model(out, f);
  return out.str();
}

Forest loaded(const std::string& text) {
  std::istringstream in(text);
  return read_model(in);
}

}  // namespace

TEST(ModelIo, RoundTripPreservesForestAndPredictions) {
  const Forest f = trained(7, 3);
  const Forest g = loaded(saved(f));
  EXPECT_EQ(f, g);
  Rng rng(4);
  for (int i = 0; i < 200; ++i) {
    std::vector<double> x(4);
    for (double& v : x) v = rng.uniform_real() * 1.2 - 0.6;
    ASSERT_EQ(predict(f, x), predict(g, x));
  }
  EXPECT_EQ(saved(g), saved(f));
}

TEST(ModelIo, IrrationalThresholdsSurvive) {
  Dataset d({"x"}, 2);
  for (int i = 0; i < 20; ++i) {
    d.add(std::vector<double>{i / 7.0}, parse_ranking(i < 10 ? "2>1" : "1>2", 2));
  }
  ForestConfig c;
  c.tree_count = 1;
  const Forest f = train(d, c, 1);
  const Forest g = loaded(saved(f));
  EXPECT_EQ(g, f);
  EXPECT_EQ(predict(g, std::vector<double>{10 / 7.0}), predict(f, std::vector<double>{10 / 7.0}));
}

TEST(ModelIo, SingleTreeFileHasOneTreeRecord) {
  const std::string text = saved(trained(1, 5));
  std::size_t count = 0;
  for (std::size_t pos = text.find("\ntree "); pos != std::string::npos;
       pos = text.find("\ntree ", pos + 1)) {
    ++count;
  }
  EXPECT_EQ(count, 1u);
  EXPECT_EQ(text.rfind("LRRF-MODEL 1\n", 0), 0u);
}

TEST(ModelIo, DamagedFilesRejected) {
  const std::string good = saved(trained(2, 6));
  std::string bad_magic = good;
  bad_magic[0] = 'X';
  EXPECT_THROW(loaded(bad_magic), InputError);

  std::string version = good;
  version.replace(version.find(" 1\n"), 3, " 2\n");
  EXPECT_THROW(loaded(version), InputError);

  EXPECT_THROW(loaded(good.substr(0, good.size() / 2)), InputError);
  EXPECT_THROW(loaded(good.substr(0, good.rfind("checksum"))), InputError);

  std::string flipped = good;
  const std::size_t n = flipped.find("\nN ");
  ASSERT_NE(n, std::string::npos);
  flipped[n + 3] = flipped[n + 3] == '0' ? '1' : '0';
  EXPECT_THROW(loaded(flipped), InputError);

  EXPECT_THROW(loaded(""), InputError);
}

TEST(ModelIo, MissingFile) {
  EXPECT_THROW(load_model("/nonexistent/model.lrrf"), InputError);
}
