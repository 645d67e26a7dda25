#pragma once

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

#include "lrrf/dataset.hpp"
#include "lrrf/random.hpp"
#include "lrrf/ranking.hpp"

namespace lrrf::testing {

inline Ranking random_complete(Rng& rng, int m) {
  std::vector<int> order(static_cast<std::size_t>(m));
  std::iota(order.begin(), order.end(), 1);
  for (std::size_t i = order.size(); i > 1; --i) {
    std::swap(order[i - 1], order[rng.uniform_index(i)]);
  }
  return Ranking::from_order(m, order);
}

// Random partial ranking with at least two observed labels.
inline Ranking random_partial(Rng& rng, int m) {
  const Ranking full = random_complete(rng, m);
  const std::size_t keep = 2 + rng.uniform_index(static_cast<std::size_t>(m) - 1);
  std::vector<int> order(full.order().begin(), full.order().begin() + keep);
  return Ranking::from_order(m, order);
}

// Every permutation of 1..m as a complete ranking.
inline std::vector<Ranking> all_permutations(int m) {
  std::vector<int> order(static_cast<std::size_t>(m));
  std::iota(order.begin(), order.end(), 1);
  std::vector<Ranking> out;
  do {
    out.push_back(Ranking::from_order(m, order));
  } while (std::next_permutation(order.begin(), order.end()));
  return out;
}

// n rows of d features drawn from a small grid (so ties occur) with random
// complete rankings whose top label follows the first feature.
inline Dataset random_dataset(Rng& rng, std::size_t n, std::size_t d, int m) {
  std::vector<std::string> names;
  for (std::size_t a = 0; a < d; ++a) names.push_back("x" + std::to_string(a + 1));
  Dataset data(names, m);
  std::vector<double> x(d);
  for (std::size_t i = 0; i < n; ++i) {
    for (double& v : x) v = static_cast<double>(rng.uniform_index(9)) / 8.0 - 0.5;
    Ranking r = random_complete(rng, m);
    if (x[0] > 0.0 && rng.uniform_real() < 0.8) {
      std::vector<int> order(r.order().begin(), r.order().end());
      std::erase(order, 1);
      order.insert(order.begin(), 1);
      r = Ranking::from_order(m, order);
    }
    data.add(x, r);
  }
  return data;
}

inline std::string data_file(const std::string& name) {
  return std::string(LRRF_DATA_DIR) + "/" + name;
}

}  // namespace lrrf::testing
