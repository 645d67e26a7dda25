#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "lrrf/ranking.hpp"

namespace lrrf {

// n instances, each a d-dimensional real feature vector paired with a
// ranking over m labels. Features are stored row-major.
class Dataset {
 public:
  Dataset(std::vector<std::string> attribute_names, int label_count);

  void add(std::span<const double> features, Ranking ranking);

  std::size_t size() const noexcept { return rankings_.size(); }
  bool empty() const noexcept { return rankings_.empty(); }
  std::size_t attribute_count() const noexcept { return names_.size(); }
  int label_count() const noexcept { return label_count_; }

  std::span<const double> features(std::size_t row) const {
    return {features_.data() + row * names_.size(), names_.size()};
  }
  double feature(std::size_t row, std::size_t attribute) const {
    return features_[row * names_.size() + attribute];
  }
  const Ranking& ranking(std::size_t row) const { return rankings_[row]; }
  std::span<const Ranking> rankings() const noexcept { return rankings_; }
  const std::vector<std::string>& attribute_names() const noexcept {
    return names_;
  }

  // Rows in the given order; repeated indices give repeated rows.
  Dataset subset(std::span<const std::size_t> rows) const;

  // Same features with the rankings replaced (one per row).
  Dataset with_rankings(std::vector<Ranking> rankings) const;

  friend bool operator==(const Dataset&, const Dataset&) = default;

 private:
  std::vector<std::string> names_;
  int label_count_;
  std::vector<double> features_;
  std::vector<Ranking> rankings_;
};

// LRD-CSV: header `a1,...,ad,ranking` (the last column may be written
// `ranking:m` to fix the label count when it cannot be inferred), then one
// instance per line with a '>'-separated ranking in the last cell.
Dataset read_dataset(std::istream& in);
Dataset load_dataset(const std::filesystem::path& path);
void write_dataset(std::ostream& out, const Dataset& data);
void save_dataset(const std::filesystem::path& path, const Dataset& data);

// Rewrites a KEBI-style file into LRD-CSV. Accepted inputs:
//  * CSV or ARFF whose last column holds label tokens, e.g. `L2>L3>L1`;
//  * CSV with trailing columns L1..Lm holding the position of each label.
void convert_kebi(std::istream& in, std::ostream& out);

struct CorruptionSpec {
  double missing_probability = 0.0;  // p0 in [0, 1]
  std::uint64_t seed = 0;
};

// Deletes each label of each ranking independently with probability p0 and
// re-ranks the survivors. When fewer than two labels survive, the two
// best-ranked labels of the original ranking are kept instead. Features are
// untouched. Requires complete rankings.
Dataset corrupt_rankings(const Dataset& data, const CorruptionSpec& spec);

// Test-fold membership for repeated k-fold cross-validation.
struct FoldPlan {
  std::size_t folds = 0;
  // test_rows[repetition][fold] lists the held-out row indices.
  std::vector<std::vector<std::vector<std::size_t>>> test_rows;

  std::size_t repetitions() const noexcept { return test_rows.size(); }
  // All rows of `repetition` not in the given test fold, ascending.
  std::vector<std::size_t> training_rows(std::size_t repetition,
                                         std::size_t fold) const;
};

// Each repetition shuffles 0..n-1 and cuts it into k folds whose sizes differ
// by at most one (the first n mod k folds take the extra row).
FoldPlan kfold_split(std::size_t n, std::size_t folds, std::size_t repetitions,
                     std::uint64_t seed);

}  // namespace lrrf
