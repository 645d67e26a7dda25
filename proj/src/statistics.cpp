#include "lrrf/statistics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>

#include "lrrf/error.hpp"
#include "text.hpp"

namespace lrrf {
namespace {

struct QEntry {
  std::size_t methods;
  double q;
};

// Two-tailed Bonferroni-Dunn critical values (Demsar, 2006); k = 12 at 0.05
// is the value used for the published twelve-method comparison.
constexpr std::array kQ005 = {QEntry{2, 1.960}, QEntry{3, 2.241}, QEntry{4, 2.394},
                              QEntry{5, 2.498}, QEntry{6, 2.576}, QEntry{7, 2.638},
                              QEntry{8, 2.690}, QEntry{9, 2.724}, QEntry{10, 2.773},
                              QEntry{12, 2.871}};
constexpr std::array kQ010 = {QEntry{2, 1.645}, QEntry{3, 1.960}, QEntry{4, 2.128},
                              QEntry{5, 2.241}, QEntry{6, 2.326}, QEntry{7, 2.394},
                              QEntry{8, 2.450}, QEntry{9, 2.498}, QEntry{10, 2.539}};

double round2(double x) { return std::round(x * 100.0) / 100.0; }

}  // namespace

std::vector<double> descending_ranks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
  std::vector<double> ranks(values.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
    // positions i+1 .. j+1 share their mean
    const double shared = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = shared;
    i = j + 1;
  }
  return ranks;
}

RankTable average_ranks(std::vector<std::string> datasets, std::vector<std::string> methods,
                        std::vector<std::vector<double>> scores) {
  const std::size_t k = methods.size();
  if (k < 2) throw InputError("need at least two methods to rank");
  if (datasets.empty() || scores.size() != datasets.size()) {
    throw InputError("score table needs one row per dataset");
  }
  RankTable table{std::move(datasets), std::move(methods), std::move(scores), {}, {}};
  table.avg_ranks.assign(k, 0.0);
  for (std::size_t row = 0; row < table.scores.size(); ++row) {
    const auto& values = table.scores[row];
    if (values.size() != k) {
      throw InputError("dataset '" + table.datasets[row] + "' has " +
                       std::to_string(values.size()) + " scores, expected " + std::to_string(k));
    }
    for (std::size_t j = 0; j < k; ++j) {
      if (std::isnan(values[j])) {
        throw InputError("missing score for method '" + table.methods[j] + "' on dataset '" +
                         table.datasets[row] + "'");
      }
    }
    table.ranks.push_back(descending_ranks(values));
    for (std::size_t j = 0; j < k; ++j) table.avg_ranks[j] += table.ranks.back()[j];
  }
  for (double& r : table.avg_ranks) r /= static_cast<double>(table.scores.size());
  return table;
}

FriedmanResult friedman_test(std::span<const double> avg_ranks, std::size_t dataset_count) {
  const std::size_t k = avg_ranks.size();
  if (k < 2) throw InputError("Friedman test needs at least two methods");
  if (dataset_count < 2) throw InputError("Friedman test needs at least two datasets");
  const double kd = static_cast<double>(k);
  const double n = static_cast<double>(dataset_count);
  double sum_sq = 0.0;
  for (const double r : avg_ranks) sum_sq += r * r;
  const double chi = 12.0 * n / (kd * (kd + 1.0)) * (sum_sq - kd * (kd + 1.0) * (kd + 1.0) / 4.0);
  const double denominator = n * (kd - 1.0) - chi;
  if (!(denominator > 0.0)) {
    throw InputError("Friedman statistic undefined: N(k-1) - chi2 = " + text::fixed(denominator, 6));
  }
  return FriedmanResult{chi, (n - 1.0) * chi / denominator, k - 1, (k - 1) * (dataset_count - 1)};
}

std::optional<double> bonferroni_dunn_q(std::size_t methods, double alpha) {
  const auto lookup = [&](const auto& table) -> std::optional<double> {
    for (const QEntry& e : table) {
      if (e.methods == methods) return e.q;
    }
    return std::nullopt;
  };
  if (std::abs(alpha - 0.05) < 1e-12) return lookup(kQ005);
  if (std::abs(alpha - 0.10) < 1e-12) return lookup(kQ010);
  return std::nullopt;
}

double critical_difference(std::size_t methods, std::size_t dataset_count, double q) {
  if (methods < 2) throw InputError("critical difference needs at least two methods");
  if (dataset_count < 1) throw InputError("critical difference needs at least one dataset");
  if (!(q > 0.0)) throw InputError("q must be positive");
  const double k = static_cast<double>(methods);
  return q * std::sqrt(k * (k + 1.0) / (6.0 * static_cast<double>(dataset_count)));
}

Comparison compare_methods(RankTable table, double alpha, std::optional<double> q) {
  const std::size_t k = table.methods.size();
  const std::size_t n = table.datasets.size();
  if (!q) q = bonferroni_dunn_q(k, alpha);
  if (!q) {
    throw InputError("no tabulated Bonferroni-Dunn q for " + std::to_string(k) +
                     " methods at alpha " + text::shortest(alpha) + "; pass q explicitly");
  }
  std::vector<double> rounded(table.avg_ranks.size());
  std::transform(table.avg_ranks.begin(), table.avg_ranks.end(), rounded.begin(), round2);
  Comparison c;
  c.friedman = friedman_test(table.avg_ranks, n);
  c.friedman_rounded = friedman_test(rounded, n);
  c.alpha = alpha;
  c.q = *q;
  c.cd = critical_difference(k, n, *q);
  c.table = std::move(table);
  return c;
}

RankTable read_score_table(std::istream& in, bool drop_incomplete) {
  std::string line;
  std::vector<std::string> methods;
  std::vector<std::string> datasets;
  std::vector<std::vector<double>> scores;
  std::size_t number = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++number;
    if (text::trim(line).empty()) continue;
    const auto cells = text::split(line, ',');
    if (!header_seen) {
      if (cells.size() < 3) throw InputError("score table header needs a dataset column and two methods");
      methods.assign(cells.begin() + 1, cells.end());
      header_seen = true;
      continue;
    }
    if (cells.size() != methods.size() + 1) {
      throw InputError("line " + std::to_string(number) + ": expected " +
                       std::to_string(methods.size() + 1) + " columns");
    }
    std::vector<double> row;
    bool complete = true;
    for (std::size_t j = 1; j < cells.size(); ++j) {
      const std::string_view cell = cells[j];
      if (cell.empty() || cell == "*" || cell == "NA") {
        row.push_back(std::numeric_limits<double>::quiet_NaN());
        complete = false;
        continue;
      }
      try {
        std::size_t used = 0;
        row.push_back(std::stod(std::string(cell), &used));
        if (used != cell.size()) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        throw InputError("line " + std::to_string(number) + ": bad score '" + std::string(cell) + "'");
      }
    }
    if (!complete && drop_incomplete) continue;
    datasets.emplace_back(cells.front());
    scores.push_back(std::move(row));
  }
  if (!header_seen) throw InputError("empty score table");
  return average_ranks(std::move(datasets), std::move(methods), std::move(scores));
}

void write_rank_csv(std::ostream& out, const RankTable& table) {
  out << "dataset,method,mean_tau,std_tau,rank\n";
  for (std::size_t i = 0; i < table.datasets.size(); ++i) {
    for (std::size_t j = 0; j < table.methods.size(); ++j) {
      out << table.datasets[i] << ',' << table.methods[j] << ','
          << text::fixed(table.scores[i][j], 3) << ",," << text::fixed(table.ranks[i][j], 2)
          << '\n';
    }
  }
}

void write_comparison_summary(std::ostream& out, const Comparison& c) {
  const RankTable& t = c.table;
  std::size_t width = 0;
  for (const auto& m : t.methods) width = std::max(width, m.size());
  out << "methods: " << t.methods.size() << "\n"
      << "datasets: " << t.datasets.size() << "\n"
      << "average ranks:\n";
  for (std::size_t j = 0; j < t.methods.size(); ++j) {
    out << "  " << t.methods[j] << std::string(width - t.methods[j].size() + 2, ' ')
        << text::fixed(t.avg_ranks[j], 2) << '\n';
  }
  out << "friedman chi2: " << text::fixed(c.friedman.chi_square, 3) << '\n'
      << "F_F: " << text::fixed(c.friedman.statistic, 3) << " (from 2-decimal ranks: "
      << text::fixed(c.friedman_rounded.statistic, 3) << ")\n"
      << "df: " << c.friedman.df_methods << ' ' << c.friedman.df_error << '\n'
      << "bonferroni-dunn: alpha " << text::fixed(c.alpha, 2) << " q " << text::fixed(c.q, 3)
      << " CD " << text::fixed(c.cd, 2) << '\n';
}

}  // namespace lrrf
