#include "lrrf/ranking.hpp"

#include <charconv>
#include <string>

#include "lrrf/error.hpp"
#include "text.hpp"

namespace lrrf {
namespace {

using text::trim;

void require_same_universe(const Ranking& a, const Ranking& b) {
  if (a.label_count() != b.label_count()) {
    throw InputError("rankings over different label counts (" +
                     std::to_string(a.label_count()) + " vs " +
                     std::to_string(b.label_count()) + ")");
  }
}

void require_complete(const Ranking& a, const Ranking& b, const char* what) {
  require_same_universe(a, b);
  if (!a.complete() || !b.complete()) {
    throw InputError(std::string(what) + " is only defined for complete rankings");
  }
}

struct PairCounts {
  long long concordant = 0;
  long long discordant = 0;
};

PairCounts count_pairs(const Ranking& a, const Ranking& b) {
  require_same_universe(a, b);
  const auto pa = a.positions();
  const auto pb = b.positions();
  const int m = a.label_count();
  PairCounts counts;
  for (int i = 0; i < m; ++i) {
    if (pa[i] == 0 || pb[i] == 0) continue;
    for (int j = i + 1; j < m; ++j) {
      if (pa[j] == 0 || pb[j] == 0) continue;
      if ((pa[i] - pa[j]) * (pb[i] - pb[j]) < 0) {
        ++counts.discordant;
      } else {
        ++counts.concordant;
      }
    }
  }
  if (counts.concordant + counts.discordant == 0) {
    throw InputError("rankings share no commonly observed label pair");
  }
  return counts;
}

}  // namespace

Ranking::Ranking(int label_count, std::vector<int> order)
    : label_count_(label_count),
      order_(std::move(order)),
      position_(static_cast<std::size_t>(label_count), 0) {
  for (std::size_t r = 0; r < order_.size(); ++r) {
    position_[static_cast<std::size_t>(order_[r] - 1)] = static_cast<int>(r) + 1;
  }
}

Ranking Ranking::from_order(int label_count, std::vector<int> order) {
  if (label_count < 2) {
    throw InputError("label count must be at least 2, got " +
                     std::to_string(label_count));
  }
  if (order.size() < 2) {
    throw InputError("a ranking needs at least two labels");
  }
  std::vector<bool> seen(static_cast<std::size_t>(label_count), false);
  for (const int label : order) {
    if (label < 1 || label > label_count) {
      throw InputError("label " + std::to_string(label) + " outside [1, " +
                       std::to_string(label_count) + "]");
    }
    if (seen[static_cast<std::size_t>(label - 1)]) {
      throw InputError("duplicate label " + std::to_string(label));
    }
    seen[static_cast<std::size_t>(label - 1)] = true;
  }
  return Ranking(label_count, std::move(order));
}

Ranking Ranking::from_positions(std::span<const int> positions) {
  const int m = static_cast<int>(positions.size());
  if (m < 2) throw InputError("a ranking needs at least two labels");
  std::vector<int> order(positions.size(), 0);
  for (int i = 0; i < m; ++i) {
    const int p = positions[static_cast<std::size_t>(i)];
    if (p < 1 || p > m || order[static_cast<std::size_t>(p - 1)] != 0) {
      throw InputError("positions do not form a permutation of 1.." +
                       std::to_string(m));
    }
    order[static_cast<std::size_t>(p - 1)] = i + 1;
  }
  return Ranking(m, std::move(order));
}

Ranking Ranking::identity(int label_count) {
  std::vector<int> order(static_cast<std::size_t>(label_count));
  for (int i = 0; i < label_count; ++i) order[static_cast<std::size_t>(i)] = i + 1;
  return from_order(label_count, std::move(order));
}

int Ranking::position(LabelId label) const {
  if (label.index < 1 || label.index > label_count_) {
    throw InputError("label " + std::to_string(label.index) + " outside [1, " +
                     std::to_string(label_count_) + "]");
  }
  return position_[static_cast<std::size_t>(label.index - 1)];
}

LabelId Ranking::label_at(int position) const {
  if (position < 1 || position > observed_count()) {
    throw InputError("position " + std::to_string(position) +
                     " outside observed range");
  }
  return LabelId{order_[static_cast<std::size_t>(position - 1)]};
}

Ranking Ranking::reversed() const {
  return Ranking(label_count_, std::vector<int>(order_.rbegin(), order_.rend()));
}

Ranking parse_ranking(std::string_view text, int label_count) {
  const std::string_view body = trim(text);
  std::vector<int> order;
  std::size_t start = 0;
  for (;;) {
    const std::size_t gt = body.find('>', start);
    const std::string_view token =
        trim(body.substr(start, gt == std::string_view::npos ? gt : gt - start));
    int label = 0;
    const auto [end, ec] =
        std::from_chars(token.data(), token.data() + token.size(), label);
    if (token.empty() || ec != std::errc{} || end != token.data() + token.size()) {
      throw InputError("malformed label token '" + std::string(token) +
                       "' in ranking '" + std::string(body) + "'");
    }
    order.push_back(label);
    if (gt == std::string_view::npos) break;
    start = gt + 1;
  }
  return Ranking::from_order(label_count, std::move(order));
}

std::string format_ranking(const Ranking& ranking) {
  std::string out;
  for (const int label : ranking.order()) {
    if (!out.empty()) out += '>';
    out += std::to_string(label);
  }
  return out;
}

long long kendall_distance(const Ranking& a, const Ranking& b) {
  return count_pairs(a, b).discordant;
}

double kendall_tau(const Ranking& a, const Ranking& b) {
  const PairCounts c = count_pairs(a, b);
  if (a.complete() && b.complete()) {
    const double m = a.label_count();
    return 1.0 - 4.0 * static_cast<double>(c.discordant) / (m * (m - 1.0));
  }
  return static_cast<double>(c.concordant - c.discordant) /
         static_cast<double>(c.concordant + c.discordant);
}

long long spearman_distance(const Ranking& a, const Ranking& b) {
  require_complete(a, b, "Spearman distance");
  long long sum = 0;
  for (std::size_t i = 0; i < a.positions().size(); ++i) {
    const long long diff = a.positions()[i] - b.positions()[i];
    sum += diff * diff;
  }
  return sum;
}

long long footrule_distance(const Ranking& a, const Ranking& b) {
  require_complete(a, b, "Spearman footrule");
  long long sum = 0;
  for (std::size_t i = 0; i < a.positions().size(); ++i) {
    const long long diff = a.positions()[i] - b.positions()[i];
    sum += diff < 0 ? -diff : diff;
  }
  return sum;
}

long long generalized_kendall_distance(const Ranking& pi,
                                       std::span<const Ranking> others) {
  if (others.empty()) throw InputError("no rankings to compare against");
  if (!pi.complete()) {
    throw InputError("generalized Kendall distance needs a complete reference");
  }
  long long total = 0;
  for (const Ranking& sigma : others) total += kendall_distance(pi, sigma);
  return total;
}

RankDistanceReport compare_rankings(const Ranking& a, const Ranking& b) {
  require_complete(a, b, "distance report");
  return RankDistanceReport{kendall_distance(a, b), spearman_distance(a, b),
                            footrule_distance(a, b), kendall_tau(a, b)};
}

}  // namespace lrrf
