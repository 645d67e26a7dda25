#include "lrrf/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>

#include "lrrf/dataset.hpp"
#include "lrrf/error.hpp"
#include "lrrf/eval.hpp"
#include "lrrf/forest.hpp"
#include "lrrf/model_io.hpp"
#include "lrrf/statistics.hpp"
#include "text.hpp"

namespace lrrf {
namespace {

struct ForestFlags {
  std::size_t trees = 50;
  int depth = 8;
  std::uint64_t seed = 0;
  unsigned threads = 0;
};

struct CvFlags {
  std::size_t folds = 10;
  std::size_t reps = 5;
  double p0 = 0.0;
};

void add_forest_flags(CLI::App& cmd, ForestFlags& f) {
  cmd.add_option("--trees", f.trees, "Trees in the forest")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd.add_option("--depth", f.depth, "Maximum tree depth (root = 1)")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd.add_option("--seed", f.seed, "Master random seed")->capture_default_str();
  cmd.add_option("--threads", f.threads, "Worker threads (0 = all cores)")->capture_default_str();
}

void add_cv_flags(CLI::App& cmd, CvFlags& f) {
  cmd.add_option("--folds", f.folds, "Cross-validation folds")
      ->capture_default_str()
      ->check(CLI::Range(2, 1000000));
  cmd.add_option("--reps", f.reps, "Cross-validation repetitions")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd.add_option("--p0", f.p0, "Probability of deleting each training label")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
}

ForestConfig forest_config(const ForestFlags& f) {
  ForestConfig c;
  c.tree_count = f.trees;
  c.tree.max_depth = f.depth;
  c.seed = f.seed;
  return c;
}

CvConfig cv_config(const ForestFlags& f, const CvFlags& cv) {
  CvConfig c;
  c.folds = cv.folds;
  c.repetitions = cv.reps;
  c.seed = f.seed;
  c.forest = forest_config(f);
  c.threads = f.threads;
  if (cv.p0 > 0.0) c.corruption = CorruptionSpec{cv.p0, 0};
  return c;
}

void write_file(const std::string& path, const std::function<void(std::ostream&)>& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  body(out);
  if (!out.flush()) throw InputError("failed writing '" + path + "'");
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  return in;
}

std::string dataset_name(const std::string& path) {
  return std::filesystem::path(path).stem().string();
}

template <class T>
T parse_value(const std::string& token, const std::string& param) {
  std::istringstream in(token);
  T value{};
  if (!(in >> value) || !(in >> std::ws).eof()) {
    throw InputError("bad value '" + token + "' for --param " + param);
  }
  return value;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Label ranking with random forests"};
  app.name(args.empty() ? "lrrf" : std::filesystem::path(args.front()).filename().string());
  app.require_subcommand(1);

  std::string data_path, out_path, model_path, in_path, scores_path, folds_out, param;
  std::vector<std::string> values;
  ForestFlags ff;
  CvFlags cv;
  double alpha = 0.05;
  std::optional<double> q;
  bool drop_incomplete = false;

  auto* train_cmd = app.add_subcommand("train", "Train a forest and save the model");
  train_cmd->add_option("--data", data_path, "Training data (LRD-CSV)")->required();
  train_cmd->add_option("--out", out_path, "Model file to write")->required();
  add_forest_flags(*train_cmd, ff);

  auto* predict_cmd = app.add_subcommand("predict", "Predict a ranking for every row");
  predict_cmd->add_option("--model", model_path, "Model file")->required();
  predict_cmd->add_option("--data", data_path, "Instances (LRD-CSV)")->required();
  predict_cmd->add_option("--out", out_path, "Prediction file (default: stdout)");
  predict_cmd->add_option("--threads", ff.threads, "Worker threads (0 = all cores)");

  auto* evaluate_cmd = app.add_subcommand("evaluate", "Repeated k-fold cross-validation");
  evaluate_cmd->add_option("--data", data_path, "Data (LRD-CSV)")->required();
  evaluate_cmd->add_option("--out", out_path, "Report CSV (default: stdout)");
  evaluate_cmd->add_option("--folds-out", folds_out, "Per-fold tau CSV");
  add_forest_flags(*evaluate_cmd, ff);
  add_cv_flags(*evaluate_cmd, cv);

  auto* corrupt_cmd = app.add_subcommand("corrupt", "Delete training labels at random");
  corrupt_cmd->add_option("--data", data_path, "Data (LRD-CSV, complete rankings)")->required();
  corrupt_cmd->add_option("--p0", cv.p0, "Deletion probability")
      ->required()
      ->check(CLI::Range(0.0, 1.0));
  corrupt_cmd->add_option("--seed", ff.seed, "Random seed")->capture_default_str();
  corrupt_cmd->add_option("--out", out_path, "Output LRD-CSV")->required();

  auto* convert_cmd = app.add_subcommand("convert", "Rewrite a KEBI file as LRD-CSV");
  convert_cmd->add_option("--in", in_path, "KEBI CSV or ARFF file")->required();
  convert_cmd->add_option("--out", out_path, "Output LRD-CSV")->required();

  auto* compare_cmd = app.add_subcommand("compare", "Average ranks, Friedman test and CD");
  compare_cmd->add_option("--scores", scores_path, "Wide score table CSV")->required();
  compare_cmd->add_option("--alpha", alpha, "Significance level")->capture_default_str();
  compare_cmd->add_option("--q", q, "Bonferroni-Dunn critical value (default: table lookup)");
  compare_cmd->add_flag("--drop-incomplete", drop_incomplete, "Skip rows with missing scores");
  compare_cmd->add_option("--out", out_path, "Per-cell rank CSV");

  auto* sweep_cmd = app.add_subcommand("sweep", "Evaluate over a range of one parameter");
  sweep_cmd->add_option("--data", data_path, "Data (LRD-CSV)")->required();
  sweep_cmd->add_option("--param", param, "Parameter to vary")
      ->required()
      ->check(CLI::IsMember({"trees", "depth", "p0"}));
  sweep_cmd->add_option("--values", values, "Comma-separated values")
      ->required()
      ->delimiter(',');
  sweep_cmd->add_option("--out", out_path, "Sweep CSV (default: stdout)");
  add_forest_flags(*sweep_cmd, ff);
  add_cv_flags(*sweep_cmd, cv);

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  if (args.empty()) argv.push_back("lrrf");
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*train_cmd) {
      const Dataset data = load_dataset(data_path);
      const Forest forest = train(data, forest_config(ff), ff.threads);
      save_model(out_path, forest);
    } else if (*predict_cmd) {
      const Forest forest = load_model(model_path);
      const Dataset data = load_dataset(data_path);
      if (data.label_count() != forest.label_count()) {
        throw InputError("data has " + std::to_string(data.label_count()) +
                         " labels but the model was trained on " +
                         std::to_string(forest.label_count()));
      }
      const std::vector<Ranking> predicted = predict_batch(forest, data, ff.threads);
      const auto emit = [&](std::ostream& o) {
        o << "ranking\n";
        for (const Ranking& r : predicted) o << format_ranking(r) << '\n';
      };
      if (out_path.empty()) {
        emit(out);
      } else {
        write_file(out_path, emit);
      }
      double sum = 0.0;
      for (std::size_t i = 0; i < predicted.size(); ++i) {
        sum += kendall_tau(predicted[i], data.ranking(i));
      }
      err << "mean tau against file rankings: "
          << text::fixed(sum / static_cast<double>(predicted.size()), 3) << '\n';
    } else if (*evaluate_cmd) {
      const Dataset data = load_dataset(data_path);
      const std::string name = dataset_name(data_path);
      const EvalReport report = cross_validate(data, cv_config(ff, cv));
      if (out_path.empty()) {
        write_eval_csv(out, name, report);
      } else {
        write_file(out_path, [&](std::ostream& o) { write_eval_csv(o, name, report); });
      }
      if (!folds_out.empty()) {
        write_file(folds_out, [&](std::ostream& o) { write_fold_csv(o, report); });
      }
      write_eval_summary(out, name, report);
      err << "wall time: " << text::fixed(report.wall_seconds, 2) << " s\n";
    } else if (*corrupt_cmd) {
      const Dataset data = load_dataset(data_path);
      const Dataset corrupted = corrupt_rankings(data, CorruptionSpec{cv.p0, ff.seed});
      save_dataset(out_path, corrupted);
    } else if (*convert_cmd) {
      std::ifstream in = open_input(in_path);
      std::ostringstream converted;
      convert_kebi(in, converted);
      write_file(out_path, [&](std::ostream& o) { o << converted.str(); });
    } else if (*compare_cmd) {
      std::ifstream in = open_input(scores_path);
      const Comparison c = compare_methods(read_score_table(in, drop_incomplete), alpha, q);
      write_comparison_summary(out, c);
      if (!out_path.empty()) {
        write_file(out_path, [&](std::ostream& o) { write_rank_csv(o, c.table); });
      }
    } else if (*sweep_cmd) {
      const Dataset data = load_dataset(data_path);
      const std::string name = dataset_name(data_path);
      std::vector<SweepPoint> points;
      double seconds = 0.0;
      for (const std::string& raw : values) {
        const std::string value(text::trim(raw));
        ForestFlags f = ff;
        CvFlags c = cv;
        if (param == "trees") {
          f.trees = parse_value<std::size_t>(value, param);
          if (f.trees < 1) throw InputError("trees must be positive");
        } else if (param == "depth") {
          f.depth = parse_value<int>(value, param);
          if (f.depth < 1) throw InputError("depth must be positive");
        } else {
          c.p0 = parse_value<double>(value, param);
          if (c.p0 < 0.0 || c.p0 > 1.0) throw InputError("p0 must lie in [0, 1]");
        }
        points.push_back({value, cross_validate(data, cv_config(f, c))});
        seconds += points.back().report.wall_seconds;
      }
      if (out_path.empty()) {
        write_sweep_csv(out, name, param, points);
      } else {
        write_file(out_path, [&](std::ostream& o) { write_sweep_csv(o, name, param, points); });
      }
      err << "wall time: " << text::fixed(seconds, 2) << " s\n";
    }
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitOk;
}

}  // namespace lrrf
