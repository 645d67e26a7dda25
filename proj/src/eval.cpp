#include "lrrf/eval.hpp"

#include <chrono>
#include <cmath>
#include <numeric>
#include <tuple>
#include <ostream>

#include "lrrf/error.hpp"
#include "lrrf/parallel.hpp"
#include "text.hpp"

namespace lrrf {
namespace {

constexpr std::uint64_t kSplitStream = 1;
constexpr std::uint64_t kCorruptionStream = 2;
constexpr std::uint64_t kForestStream = 3;

double fold_score(const Forest& forest, const Dataset& data,
                  const std::vector<std::size_t>& rows) {
  double sum = 0.0;
  for (const std::size_t row : rows) {
    sum += kendall_tau(predict(forest, data.features(row)), data.ranking(row));
  }
  return sum / static_cast<double>(rows.size());
}

}  // namespace

std::pair<double, double> mean_and_std(const std::vector<double>& values) {
  if (values.empty()) return {0.0, 0.0};
  const double n = static_cast<double>(values.size());
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  if (values.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (const double v : values) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / (n - 1.0))};
}

EvalReport cross_validate(const Dataset& data, const CvConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  if (config.folds < 2) throw InputError("cross-validation needs at least 2 folds");
  if (config.repetitions < 1) throw InputError("cross-validation needs at least 1 repetition");
  if (data.size() < config.folds) {
    throw InputError("dataset has " + std::to_string(data.size()) + " instances, fewer than " +
                     std::to_string(config.folds) + " folds");
  }

  const FoldPlan plan =
      kfold_split(data.size(), config.folds, config.repetitions, derive_seed(config.seed, kSplitStream));

  // One corrupted copy per repetition; only its training rows are used.
  std::vector<Dataset> training_pool;
  training_pool.reserve(config.repetitions);
  for (std::size_t r = 0; r < config.repetitions; ++r) {
    if (config.corruption) {
      CorruptionSpec spec = *config.corruption;
      spec.seed = derive_seed(derive_seed(config.seed, kCorruptionStream), r);
      training_pool.push_back(corrupt_rankings(data, spec));
    } else {
      training_pool.push_back(data);
    }
  }

  const std::size_t tasks = config.folds * config.repetitions;
  EvalReport report;
  report.folds = config.folds;
  report.repetitions = config.repetitions;
  report.fold_taus.assign(tasks, 0.0);
  parallel_for(tasks, config.threads, [&](std::size_t task) {
    const std::size_t rep = task / config.folds;
    const std::size_t fold = task % config.folds;
    ForestConfig forest_config = config.forest;
    forest_config.seed = derive_seed(derive_seed(config.seed, kForestStream), task);
    const Dataset training = training_pool[rep].subset(plan.training_rows(rep, fold));
    const Forest forest = train(training, forest_config, 1);
    report.fold_taus[task] = fold_score(forest, data, plan.test_rows[rep][fold]);
  });

  std::tie(report.mean_tau, report.std_tau) = mean_and_std(report.fold_taus);
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

void write_eval_csv(std::ostream& out, const std::string& dataset, const EvalReport& report) {
  out << "dataset,method,mean_tau,std_tau,rank\n"
      << dataset << ",LR-RF," << text::fixed(report.mean_tau, 3) << ','
      << text::fixed(report.std_tau, 3) << ",1.00\n";
}

void write_fold_csv(std::ostream& out, const EvalReport& report) {
  out << "repetition,fold,tau\n";
  for (std::size_t i = 0; i < report.fold_taus.size(); ++i) {
    out << i / report.folds + 1 << ',' << i % report.folds + 1 << ','
        << text::shortest(report.fold_taus[i]) << '\n';
  }
}

void write_eval_summary(std::ostream& out, const std::string& dataset, const EvalReport& report) {
  out << "dataset: " << dataset << '\n'
      << "protocol: " << report.repetitions << " x " << report.folds << "-fold cross-validation\n"
      << "mean tau: " << text::fixed(report.mean_tau, 3) << '\n'
      << "std tau: " << text::fixed(report.std_tau, 3) << '\n';
}

void write_sweep_csv(std::ostream& out, const std::string& dataset, const std::string& param,
                     const std::vector<SweepPoint>& points) {
  out << "dataset,param,value,mean_tau,std_tau\n";
  for (const SweepPoint& p : points) {
    out << dataset << ',' << param << ',' << p.value << ',' << text::fixed(p.report.mean_tau, 3)
        << ',' << text::fixed(p.report.std_tau, 3) << '\n';
  }
}

}  // namespace lrrf
