#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "lrrf/ranking.hpp"

namespace lrrf {

// Orders labels whose average Borda scores are exactly equal.
struct TieBreakPolicy {
  enum class Mode {
    kLowestLabelIndex,  // lower label index first
    kSeededRandom,      // a seed-determined random priority over labels
  };

  Mode mode = Mode::kLowestLabelIndex;
  std::uint64_t seed = 0;

  static TieBreakPolicy lowest_label_index() { return {}; }
  static TieBreakPolicy seeded_random(std::uint64_t seed) {
    return {Mode::kSeededRandom, seed};
  }

  friend bool operator==(const TieBreakPolicy&, const TieBreakPolicy&) = default;
};

// Average Borda score of each label over a collection of rankings.
struct BordaScores {
  int label_count = 0;
  std::vector<double> scores;  // scores[i - 1] is the score of label i

  double score(LabelId label) const {
    return scores.at(static_cast<std::size_t>(label.index - 1));
  }
};

// Generalized Borda scores. A ranking with m' observed labels gives the label
// at rank r the score (m' + 1 - r)(m + 1)/(m' + 1) and every missing label
// (m + 1)/2; for complete rankings this is the plain Borda score m + 1 - r.
BordaScores borda_scores(std::span<const Ranking> rankings, int label_count);

// Plain Borda aggregation of complete rankings: labels sorted by decreasing
// average score. Throws InputError on empty input, partial rankings, or mixed
// label counts.
Ranking borda_aggregate(std::span<const Ranking> rankings,
                        TieBreakPolicy tie = {});

// Borda aggregation that also accepts partial rankings. The result is always
// complete.
Ranking generalized_borda_aggregate(std::span<const Ranking> rankings,
                                    int label_count, TieBreakPolicy tie = {});

}  // namespace lrrf
