#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace lrrf {

// Scores of several methods on several datasets with per-dataset ranks
// (1 = best, higher score is better, ties share the mean of their positions).
struct RankTable {
  std::vector<std::string> datasets;
  std::vector<std::string> methods;
  std::vector<std::vector<double>> scores;  // [dataset][method]
  std::vector<std::vector<double>> ranks;   // [dataset][method]
  std::vector<double> avg_ranks;            // [method]
};

// Throws InputError on ragged rows, fewer than two methods, or NaN (missing)
// cells.
RankTable average_ranks(std::vector<std::string> datasets, std::vector<std::string> methods,
                        std::vector<std::vector<double>> scores);

// Rank of each value within `values`, descending, ties averaged.
std::vector<double> descending_ranks(std::span<const double> values);

struct FriedmanResult {
  double chi_square = 0.0;
  double statistic = 0.0;  // Iman-Davenport F_F
  std::size_t df_methods = 0;
  std::size_t df_error = 0;
};

// Iman-Davenport form of the Friedman test from average ranks of k methods
// over `dataset_count` datasets.
FriedmanResult friedman_test(std::span<const double> avg_ranks, std::size_t dataset_count);

// Two-tailed Bonferroni-Dunn critical value q_alpha for k methods, if
// tabulated (alpha 0.05: k = 2..10 and 12; alpha 0.10: k = 2..10).
std::optional<double> bonferroni_dunn_q(std::size_t methods, double alpha);

// q * sqrt(k(k+1) / (6N))
double critical_difference(std::size_t methods, std::size_t dataset_count, double q);

struct Comparison {
  RankTable table;
  FriedmanResult friedman;          // from the exact average ranks
  FriedmanResult friedman_rounded;  // from average ranks rounded to 2 decimals
  double alpha = 0.05;
  double q = 0.0;
  double cd = 0.0;
};

// Average ranks, Friedman statistics and the Bonferroni-Dunn CD. When `q` is
// unset it is looked up with bonferroni_dunn_q; InputError if not tabulated.
Comparison compare_methods(RankTable table, double alpha, std::optional<double> q);

// Parses a wide score table: header `dataset,method1,...,methodk`, one
// dataset per row. Empty cells are read as NaN.
RankTable read_score_table(std::istream& in, bool drop_incomplete);

// CSV `dataset,method,mean_tau,std_tau,rank`, one row per cell.
void write_rank_csv(std::ostream& out, const RankTable& table);

// Plain-text block with average ranks, F_F with its degrees of freedom and
// the critical difference.
void write_comparison_summary(std::ostream& out, const Comparison& comparison);

}  // namespace lrrf
