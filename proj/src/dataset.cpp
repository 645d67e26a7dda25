#include "lrrf/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <optional>
#include <ostream>
#include <set>

#include "lrrf/error.hpp"
#include "lrrf/random.hpp"
#include "text.hpp"

namespace lrrf {
namespace {

using text::split;
using text::trim;

bool iequals(std::string_view a, std::string_view b) {
  return std::equal(a.begin(), a.end(), b.begin(), b.end(), [](char x, char y) {
    return std::tolower(static_cast<unsigned char>(x)) ==
           std::tolower(static_cast<unsigned char>(y));
  });
}

std::optional<double> parse_real(std::string_view cell) {
  double value = 0.0;
  const char* begin = cell.data();
  const char* end = cell.data() + cell.size();
  if (!cell.empty() && cell.front() == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (cell.empty() || ec != std::errc{} || ptr != end || !std::isfinite(value)) {
    return std::nullopt;
  }
  return value;
}

std::optional<int> parse_int(std::string_view cell) {
  int value = 0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (cell.empty() || ec != std::errc{} || ptr != cell.data() + cell.size()) {
    return std::nullopt;
  }
  return value;
}

struct Line {
  std::size_t number;
  std::string text;
};

std::vector<Line> read_lines(std::istream& in) {
  std::vector<Line> lines;
  std::string text;
  std::size_t number = 0;
  while (std::getline(in, text)) {
    ++number;
    if (!text.empty() && text.back() == '\r') text.pop_back();
    if (trim(text).empty()) continue;
    lines.push_back({number, std::move(text)});
  }
  return lines;
}

[[noreturn]] void fail_at(std::size_t line, const std::string& message) {
  throw InputError("line " + std::to_string(line) + ": " + message);
}

// Rows collected before the label count is known.
struct PendingRow {
  std::size_t line;
  std::vector<double> features;
  std::vector<int> order;
};

std::vector<int> parse_label_tokens(std::string_view cell, std::size_t line,
                                    bool allow_prefix) {
  std::vector<int> order;
  for (std::string_view token : split(cell, '>')) {
    if (allow_prefix && !token.empty() && (token.front() == 'L' || token.front() == 'l')) {
      token.remove_prefix(1);
    }
    const auto label = parse_int(token);
    if (!label) {
      fail_at(line, "malformed label token '" + std::string(token) + "' in ranking '" +
                        std::string(cell) + "'");
    }
    order.push_back(*label);
  }
  return order;
}

Dataset assemble(std::vector<std::string> names, std::optional<int> label_count,
                 std::vector<PendingRow> rows) {
  if (rows.empty()) throw InputError("no instances");
  int m = 0;
  if (label_count) {
    m = *label_count;
  } else {
    for (const PendingRow& row : rows) {
      for (const int label : row.order) m = std::max(m, label);
    }
  }
  Dataset data(std::move(names), m);
  for (PendingRow& row : rows) {
    try {
      data.add(row.features, Ranking::from_order(m, std::move(row.order)));
    } catch (const InputError& e) {
      fail_at(row.line, e.what());
    }
  }
  return data;
}

std::vector<double> parse_features(std::span<const std::string_view> cells,
                                   std::size_t line) {
  std::vector<double> features;
  features.reserve(cells.size());
  for (const std::string_view cell : cells) {
    const auto value = parse_real(cell);
    if (!value) fail_at(line, "non-numeric feature cell '" + std::string(cell) + "'");
    features.push_back(*value);
  }
  return features;
}

void check_unique(const std::vector<std::string>& names) {
  std::set<std::string> seen;
  for (const std::string& name : names) {
    if (!seen.insert(name).second) throw InputError("duplicate column name '" + name + "'");
  }
}

Dataset convert_arff(const std::vector<Line>& lines) {
  std::vector<std::string> attributes;
  std::optional<int> label_count;
  std::vector<PendingRow> rows;
  bool in_data = false;
  for (const Line& line : lines) {
    const std::string_view text = trim(line.text);
    if (text.front() == '%') continue;
    if (!in_data) {
      if (iequals(text.substr(0, 5), "@data")) {
        in_data = true;
      } else if (iequals(text.substr(0, 10), "@attribute")) {
        std::string_view rest = trim(text.substr(10));
        const std::size_t gap = rest.find_first_of(" \t");
        attributes.emplace_back(rest.substr(0, gap));
        const auto open = rest.find('{');
        const auto close = rest.rfind('}');
        if (open != std::string_view::npos && close != std::string_view::npos && close > open) {
          label_count = static_cast<int>(split(rest.substr(open + 1, close - open - 1), ',').size());
        } else {
          label_count.reset();
        }
      }
      continue;
    }
    const auto cells = split(text, ',');
    if (cells.size() != attributes.size()) {
      fail_at(line.number, "expected " + std::to_string(attributes.size()) + " columns, got " +
                               std::to_string(cells.size()));
    }
    rows.push_back({line.number,
                    parse_features(std::span(cells).first(cells.size() - 1), line.number),
                    parse_label_tokens(cells.back(), line.number, true)});
  }
  if (attributes.size() < 2) throw InputError("ARFF header declares fewer than two attributes");
  attributes.pop_back();
  check_unique(attributes);
  return assemble(std::move(attributes), label_count, std::move(rows));
}

// Trailing header columns L1..Lm, or 0 if the header does not end that way.
std::size_t label_column_count(const std::vector<std::string_view>& header) {
  std::size_t count = 0;
  for (auto it = header.rbegin(); it != header.rend(); ++it) {
    if (it->size() < 2 || (it->front() != 'L' && it->front() != 'l')) break;
    if (!parse_int(it->substr(1))) break;
    ++count;
  }
  for (std::size_t i = 0; i < count; ++i) {
    const auto index = parse_int(header[header.size() - count + i].substr(1));
    if (*index != static_cast<int>(i) + 1) return 0;
  }
  return count >= 2 ? count : 0;
}

Dataset convert_csv(const std::vector<Line>& lines) {
  const auto header = split(lines.front().text, ',');
  const std::size_t label_columns = label_column_count(header);
  const std::size_t ranking_columns = label_columns != 0 ? label_columns : 1;
  if (header.size() <= ranking_columns) throw InputError("header has no feature columns");

  std::vector<std::string> names(header.begin(), header.end() - static_cast<std::ptrdiff_t>(ranking_columns));
  check_unique(names);
  std::vector<PendingRow> rows;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const Line& line = lines[i];
    const auto cells = split(line.text, ',');
    if (cells.size() != header.size()) {
      fail_at(line.number, "expected " + std::to_string(header.size()) + " columns, got " +
                               std::to_string(cells.size()));
    }
    PendingRow row{line.number, parse_features(std::span(cells).first(names.size()), line.number), {}};
    if (label_columns == 0) {
      row.order = parse_label_tokens(cells.back(), line.number, true);
    } else {
      std::vector<int> positions;
      for (std::size_t c = names.size(); c < cells.size(); ++c) {
        const auto p = parse_int(cells[c]);
        if (!p) fail_at(line.number, "non-integer label position '" + std::string(cells[c]) + "'");
        positions.push_back(*p);
      }
      try {
        const Ranking r = Ranking::from_positions(positions);
        row.order.assign(r.order().begin(), r.order().end());
      } catch (const InputError& e) {
        fail_at(line.number, e.what());
      }
    }
    rows.push_back(std::move(row));
  }
  std::optional<int> m;
  if (label_columns != 0) m = static_cast<int>(label_columns);
  return assemble(std::move(names), m, std::move(rows));
}

}  // namespace

Dataset::Dataset(std::vector<std::string> attribute_names, int label_count)
    : names_(std::move(attribute_names)), label_count_(label_count) {
  if (label_count_ < 2) {
    throw InputError("label count must be at least 2, got " + std::to_string(label_count_));
  }
  if (names_.empty()) throw InputError("dataset needs at least one attribute");
}

void Dataset::add(std::span<const double> features, Ranking ranking) {
  if (features.size() != names_.size()) {
    throw InputError("expected " + std::to_string(names_.size()) + " features, got " +
                     std::to_string(features.size()));
  }
  if (ranking.label_count() != label_count_) {
    throw InputError("ranking over " + std::to_string(ranking.label_count()) +
                     " labels in a dataset over " + std::to_string(label_count_));
  }
  for (const double v : features) {
    if (!std::isfinite(v)) throw InputError("feature values must be finite");
  }
  features_.insert(features_.end(), features.begin(), features.end());
  rankings_.push_back(std::move(ranking));
}

Dataset Dataset::subset(std::span<const std::size_t> rows) const {
  Dataset out(names_, label_count_);
  out.features_.reserve(rows.size() * names_.size());
  out.rankings_.reserve(rows.size());
  for (const std::size_t row : rows) {
    if (row >= size()) throw InputError("row index " + std::to_string(row) + " out of range");
    const auto f = features(row);
    out.features_.insert(out.features_.end(), f.begin(), f.end());
    out.rankings_.push_back(rankings_[row]);
  }
  return out;
}

Dataset Dataset::with_rankings(std::vector<Ranking> rankings) const {
  if (rankings.size() != rankings_.size()) {
    throw InputError("replacement rankings do not match the row count");
  }
  Dataset out = *this;
  for (const Ranking& r : rankings) {
    if (r.label_count() != label_count_) throw InputError("replacement ranking over wrong label count");
  }
  out.rankings_ = std::move(rankings);
  return out;
}

Dataset read_dataset(std::istream& in) {
  const std::vector<Line> lines = read_lines(in);
  if (lines.empty()) throw InputError("missing header");

  const auto header = split(lines.front().text, ',');
  const std::string_view last = header.back();
  std::optional<int> label_count;
  if (last.starts_with("ranking:")) {
    label_count = parse_int(last.substr(8));
    if (!label_count) fail_at(lines.front().number, "malformed label count in '" + std::string(last) + "'");
  } else if (last != "ranking") {
    fail_at(lines.front().number, "missing header: last column must be named 'ranking'");
  }
  if (header.size() < 2) fail_at(lines.front().number, "header has no feature columns");
  std::vector<std::string> names(header.begin(), header.end() - 1);
  check_unique(names);

  std::vector<PendingRow> rows;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const Line& line = lines[i];
    const auto cells = split(line.text, ',');
    if (cells.back().starts_with("ranking")) fail_at(line.number, "duplicate header");
    if (cells.size() != header.size()) {
      fail_at(line.number, "expected " + std::to_string(header.size()) + " columns, got " +
                               std::to_string(cells.size()));
    }
    rows.push_back({line.number, parse_features(std::span(cells).first(names.size()), line.number),
                    parse_label_tokens(cells.back(), line.number, false)});
  }
  return assemble(std::move(names), label_count, std::move(rows));
}

Dataset load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  try {
    return read_dataset(in);
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

void write_dataset(std::ostream& out, const Dataset& data) {
  for (const std::string& name : data.attribute_names()) out << name << ',';
  const bool all_complete = std::all_of(data.rankings().begin(), data.rankings().end(),
                                        [](const Ranking& r) { return r.complete(); });
  out << "ranking";
  if (!all_complete) out << ':' << data.label_count();
  out << '\n';
  for (std::size_t row = 0; row < data.size(); ++row) {
    for (const double v : data.features(row)) out << text::shortest(v) << ',';
    out << format_ranking(data.ranking(row)) << '\n';
  }
}

void save_dataset(const std::filesystem::path& path, const Dataset& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  write_dataset(out, data);
  if (!out) throw InputError("write failed: " + path.string());
}

void convert_kebi(std::istream& in, std::ostream& out) {
  const std::vector<Line> lines = read_lines(in);
  if (lines.empty()) throw InputError("missing header");
  const char first = trim(lines.front().text).front();
  write_dataset(out, first == '@' || first == '%' ? convert_arff(lines) : convert_csv(lines));
}

Dataset corrupt_rankings(const Dataset& data, const CorruptionSpec& spec) {
  const double p0 = spec.missing_probability;
  if (!(p0 >= 0.0 && p0 <= 1.0)) {
    throw InputError("missing probability must lie in [0, 1], got " + std::to_string(p0));
  }
  const int m = data.label_count();
  std::vector<Ranking> corrupted;
  corrupted.reserve(data.size());
  for (std::size_t row = 0; row < data.size(); ++row) {
    const Ranking& original = data.ranking(row);
    if (!original.complete()) {
      throw InputError("row " + std::to_string(row + 1) +
                       ": corruption expects complete rankings");
    }
    Rng rng(derive_seed(spec.seed, row));
    std::vector<bool> deleted(static_cast<std::size_t>(m));
    for (int label = 0; label < m; ++label) {
      deleted[static_cast<std::size_t>(label)] = rng.uniform_real() < p0;
    }
    std::vector<int> survivors;
    for (const int label : original.order()) {
      if (!deleted[static_cast<std::size_t>(label - 1)]) survivors.push_back(label);
    }
    if (survivors.size() < 2) {
      survivors.assign(original.order().begin(), original.order().begin() + 2);
    }
    corrupted.push_back(Ranking::from_order(m, std::move(survivors)));
  }
  return data.with_rankings(std::move(corrupted));
}

std::vector<std::size_t> FoldPlan::training_rows(std::size_t repetition,
                                                 std::size_t fold) const {
  const auto& folds_of_rep = test_rows.at(repetition);
  std::vector<std::size_t> rows;
  for (std::size_t f = 0; f < folds_of_rep.size(); ++f) {
    if (f == fold) continue;
    rows.insert(rows.end(), folds_of_rep[f].begin(), folds_of_rep[f].end());
  }
  std::sort(rows.begin(), rows.end());
  return rows;
}

FoldPlan kfold_split(std::size_t n, std::size_t folds, std::size_t repetitions,
                     std::uint64_t seed) {
  if (folds < 2) throw InputError("need at least 2 folds");
  if (n < folds) {
    throw InputError("cannot split " + std::to_string(n) + " instances into " +
                     std::to_string(folds) + " folds");
  }
  FoldPlan plan{folds, {}};
  for (std::size_t rep = 0; rep < repetitions; ++rep) {
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    Rng rng(derive_seed(seed, rep));
    for (std::size_t i = n - 1; i > 0; --i) std::swap(perm[i], perm[rng.uniform_index(i + 1)]);

    std::vector<std::vector<std::size_t>> rep_folds(folds);
    std::size_t offset = 0;
    for (std::size_t f = 0; f < folds; ++f) {
      const std::size_t size = n / folds + (f < n % folds ? 1 : 0);
      rep_folds[f].assign(perm.begin() + static_cast<std::ptrdiff_t>(offset),
                          perm.begin() + static_cast<std::ptrdiff_t>(offset + size));
      std::sort(rep_folds[f].begin(), rep_folds[f].end());
      offset += size;
    }
    plan.test_rows.push_back(std::move(rep_folds));
  }
  return plan;
}

}  // namespace lrrf
