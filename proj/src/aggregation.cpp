#include "lrrf/aggregation.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "lrrf/error.hpp"
#include "lrrf/random.hpp"

namespace lrrf {
namespace {

void check_input(std::span<const Ranking> rankings, int label_count) {
  if (rankings.empty()) throw InputError("cannot aggregate an empty set of rankings");
  for (const Ranking& r : rankings) {
    if (r.label_count() != label_count) {
      throw InputError("ranking over " + std::to_string(r.label_count()) +
                       " labels in an aggregation over " +
                       std::to_string(label_count));
    }
  }
}

// Score totals scaled by a common denominator so that every per-ranking score
// is an integer and equal averages compare exactly equal. Falls back to
// floating point only if the scaled totals would overflow.
struct ScoreTotals {
  bool exact = true;
  std::vector<long long> scaled;
  long long scale = 1;
  std::vector<long double> approx;
};

bool checked_mul(long long a, long long b, long long& out) {
  return !__builtin_mul_overflow(a, b, &out);
}

bool checked_add(long long a, long long b, long long& out) {
  return !__builtin_add_overflow(a, b, &out);
}

bool accumulate_exact(std::span<const Ranking> rankings, int m,
                      ScoreTotals& totals) {
  long long scale = 2;
  for (const Ranking& r : rankings) {
    const long long denom = r.observed_count() + 1;
    const long long g = std::gcd(scale, denom);
    if (!checked_mul(scale / g, denom, scale)) return false;
  }
  totals.scale = scale;
  totals.scaled.assign(static_cast<std::size_t>(m), 0);
  long long missing_score = 0;
  if (!checked_mul(m + 1, scale / 2, missing_score)) return false;

  for (const Ranking& r : rankings) {
    const long long observed = r.observed_count();
    const long long unit = scale / (observed + 1);
    const auto positions = r.positions();
    for (int i = 0; i < m; ++i) {
      const int rank = positions[static_cast<std::size_t>(i)];
      long long score = missing_score;
      if (rank != 0) {
        long long partial = 0;
        if (!checked_mul(observed + 1 - rank, m + 1, partial) ||
            !checked_mul(partial, unit, score)) {
          return false;
        }
      }
      auto& total = totals.scaled[static_cast<std::size_t>(i)];
      if (!checked_add(total, score, total)) return false;
    }
  }
  return true;
}

ScoreTotals accumulate(std::span<const Ranking> rankings, int m) {
  ScoreTotals totals;
  if (accumulate_exact(rankings, m, totals)) return totals;

  totals.exact = false;
  totals.approx.assign(static_cast<std::size_t>(m), 0.0L);
  for (const Ranking& r : rankings) {
    const long double observed = r.observed_count();
    const auto positions = r.positions();
    for (int i = 0; i < m; ++i) {
      const int rank = positions[static_cast<std::size_t>(i)];
      totals.approx[static_cast<std::size_t>(i)] +=
          rank == 0 ? (m + 1) / 2.0L
                    : (observed + 1 - rank) * (m + 1) / (observed + 1);
    }
  }
  return totals;
}

// priority[i]: smaller wins a tie for label i + 1.
std::vector<std::size_t> tie_priority(int m, const TieBreakPolicy& tie) {
  std::vector<std::size_t> priority(static_cast<std::size_t>(m));
  std::iota(priority.begin(), priority.end(), std::size_t{0});
  if (tie.mode == TieBreakPolicy::Mode::kSeededRandom) {
    Rng rng(tie.seed);
    for (std::size_t i = priority.size() - 1; i > 0; --i) {
      std::swap(priority[i], priority[rng.uniform_index(i + 1)]);
    }
  }
  return priority;
}

Ranking aggregate(std::span<const Ranking> rankings, int m,
                  const TieBreakPolicy& tie) {
  const ScoreTotals totals = accumulate(rankings, m);
  const std::vector<std::size_t> priority = tie_priority(m, tie);

  std::vector<int> order(static_cast<std::size_t>(m));
  std::iota(order.begin(), order.end(), 1);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const auto ia = static_cast<std::size_t>(a - 1);
    const auto ib = static_cast<std::size_t>(b - 1);
    if (totals.exact) {
      if (totals.scaled[ia] != totals.scaled[ib]) {
        return totals.scaled[ia] > totals.scaled[ib];
      }
    } else if (totals.approx[ia] != totals.approx[ib]) {
      return totals.approx[ia] > totals.approx[ib];
    }
    return priority[ia] < priority[ib];
  });
  return Ranking::from_order(m, std::move(order));
}

}  // namespace

BordaScores borda_scores(std::span<const Ranking> rankings, int label_count) {
  check_input(rankings, label_count);
  const ScoreTotals totals = accumulate(rankings, label_count);
  const auto k = static_cast<long double>(rankings.size());
  BordaScores out{label_count, std::vector<double>(static_cast<std::size_t>(label_count))};
  for (std::size_t i = 0; i < out.scores.size(); ++i) {
    out.scores[i] = totals.exact
                        ? static_cast<double>(totals.scaled[i] / (k * totals.scale))
                        : static_cast<double>(totals.approx[i] / k);
  }
  return out;
}

Ranking borda_aggregate(std::span<const Ranking> rankings, TieBreakPolicy tie) {
  if (rankings.empty()) throw InputError("cannot aggregate an empty set of rankings");
  const int m = rankings.front().label_count();
  check_input(rankings, m);
  for (const Ranking& r : rankings) {
    if (!r.complete()) {
      throw InputError("Borda aggregation needs complete rankings; got '" +
                       format_ranking(r) + "'");
    }
  }
  return aggregate(rankings, m, tie);
}

Ranking generalized_borda_aggregate(std::span<const Ranking> rankings,
                                    int label_count, TieBreakPolicy tie) {
  check_input(rankings, label_count);
  return aggregate(rankings, label_count, tie);
}

}  // namespace lrrf
