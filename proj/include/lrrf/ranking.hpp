#pragma once

#include <compare>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace lrrf {

// 1-based label index in [1, m].
struct LabelId {
  int index = 0;

  friend auto operator<=>(const LabelId&, const LabelId&) = default;
};

// A strict complete or partial order over labels 1..m.
//
// Internally both views of the permutation are kept: `order()` lists the
// observed labels from most to least preferred, `position(label)` gives the
// 1-based rank of a label (0 when the label is not observed). For a partial
// ranking the observed positions are exactly 1..m'.
class Ranking {
 public:
  // Builds from labels listed most- to least-preferred. Throws InputError on
  // duplicates, labels outside [1, m], or fewer than two labels.
  static Ranking from_order(int label_count, std::vector<int> order);

  // Builds a complete ranking from positions pi(i) of labels 1..m.
  static Ranking from_positions(std::span<const int> positions);

  static Ranking identity(int label_count);

  int label_count() const noexcept { return label_count_; }
  int observed_count() const noexcept {
    return static_cast<int>(order_.size());
  }
  bool complete() const noexcept { return observed_count() == label_count_; }

  bool observed(LabelId label) const { return position(label) != 0; }
  int position(LabelId label) const;
  LabelId label_at(int position) const;
  LabelId top() const { return label_at(1); }

  std::span<const int> order() const noexcept { return order_; }
  // pi(i) for i = 1..m, 0 for unobserved labels.
  std::span<const int> positions() const noexcept { return position_; }

  // Same order with the preference reversed.
  Ranking reversed() const;

  friend bool operator==(const Ranking&, const Ranking&) = default;

 private:
  Ranking(int label_count, std::vector<int> order);

  int label_count_ = 0;
  std::vector<int> order_;
  std::vector<int> position_;
};

// "4>2>3>5>1" -> ranking with lambda_4 first. Surrounding whitespace of the
// string and of every token is ignored.
Ranking parse_ranking(std::string_view text, int label_count);
std::string format_ranking(const Ranking& ranking);

// Number of discordant pairs among labels observed in both rankings.
// Throws InputError if the label counts differ or no pair is observed in both.
long long kendall_distance(const Ranking& a, const Ranking& b);

// Kendall's tau. For two complete rankings this is 1 - 4 D_K / (m(m-1));
// otherwise (C - D) / (C + D) over the commonly observed pairs.
double kendall_tau(const Ranking& a, const Ranking& b);

// Sum of squared position differences; both rankings must be complete.
long long spearman_distance(const Ranking& a, const Ranking& b);

// Sum of absolute position differences; both rankings must be complete.
long long footrule_distance(const Ranking& a, const Ranking& b);

// Sum of Kendall distances from a complete ranking to each of `others`.
long long generalized_kendall_distance(const Ranking& pi,
                                       std::span<const Ranking> others);

struct RankDistanceReport {
  long long kendall = 0;
  long long spearman = 0;
  long long footrule = 0;
  double tau = 0.0;
};

// All four measures at once; both rankings must be complete.
RankDistanceReport compare_rankings(const Ranking& a, const Ranking& b);

}  // namespace lrrf
