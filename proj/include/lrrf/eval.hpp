#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lrrf/dataset.hpp"
#include "lrrf/forest.hpp"

namespace lrrf {

struct CvConfig {
  std::size_t folds = 10;
  std::size_t repetitions = 5;
  std::uint64_t seed = 0;
  // Applied to training rankings only; the seed is mixed per repetition.
  std::optional<CorruptionSpec> corruption;
  // forest.seed is ignored; every fold gets its own stream from `seed`.
  ForestConfig forest{};
  unsigned threads = 0;  // 0 = all hardware threads
};

struct EvalReport {
  std::size_t folds = 0;
  std::size_t repetitions = 0;
  // Indexed repetition * folds + fold.
  std::vector<double> fold_taus;
  double mean_tau = 0.0;
  double std_tau = 0.0;  // sample standard deviation over folds
  double wall_seconds = 0.0;
};

// Repeated k-fold cross-validation of the forest, scored by the mean Kendall
// tau between predicted and true test rankings in each fold.
EvalReport cross_validate(const Dataset& data, const CvConfig& config);

// Mean and sample standard deviation (0 for fewer than two values).
std::pair<double, double> mean_and_std(const std::vector<double>& values);

// `dataset,method,mean_tau,std_tau,rank`
void write_eval_csv(std::ostream& out, const std::string& dataset, const EvalReport& report);
// `repetition,fold,tau`
void write_fold_csv(std::ostream& out, const EvalReport& report);
void write_eval_summary(std::ostream& out, const std::string& dataset, const EvalReport& report);

struct SweepPoint {
  std::string value;
  EvalReport report;
};

// `dataset,param,value,mean_tau,std_tau`
void write_sweep_csv(std::ostream& out, const std::string& dataset, const std::string& param,
                     const std::vector<SweepPoint>& points);

}  // namespace lrrf
