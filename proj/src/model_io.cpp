#include "lrrf/model_io.hpp"

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <string_view>

#include "lrrf/error.hpp"
#include "text.hpp"

namespace lrrf {
namespace {

constexpr std::string_view kMagic = "LRRF-MODEL";
constexpr int kVersion = 1;

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const char c : bytes) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::vector<std::string_view> words(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && line[i] == ' ') ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ') ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

class Parser {
 public:
  explicit Parser(std::string_view body) : body_(body) {}

  std::string_view line() {
    if (pos_ >= body_.size()) throw InputError("truncated model file");
    const std::size_t end = body_.find('\n', pos_);
    const std::string_view out = body_.substr(pos_, end - pos_);
    pos_ = end + 1;
    ++number_;
    return out;
  }

  bool done() const { return pos_ >= body_.size(); }

  [[noreturn]] void fail(const std::string& what) const {
    throw InputError("model line " + std::to_string(number_) + ": " + what);
  }

  template <class T>
  T number(std::string_view token) const {
    T value{};
    const auto [end, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || end != token.data() + token.size()) {
      fail("bad number '" + std::string(token) + "'");
    }
    return value;
  }

  // Value of `key=value` in a config word.
  std::string_view field(std::string_view word, std::string_view key) const {
    if (word.size() <= key.size() || word.substr(0, key.size()) != key ||
        word[key.size()] != '=') {
      fail("expected '" + std::string(key) + "='");
    }
    return word.substr(key.size() + 1);
  }

 private:
  std::string_view body_;
  std::size_t pos_ = 0;
  std::size_t number_ = 0;
};

std::string tie_text(const TieBreakPolicy& tie) {
  if (tie.mode == TieBreakPolicy::Mode::kLowestLabelIndex) return "lowest";
  return "random:" + std::to_string(tie.seed);
}

void write_node(std::ostream& out, const TreeNode& node) {
  if (const auto* internal = std::get_if<InternalNode>(&node)) {
    out << "N " << internal->rule.attribute << ' ' << text::shortest(internal->rule.threshold)
        << '\n';
    return;
  }
  const auto& leaf = std::get<LeafNode>(node);
  out << "L " << leaf.rankings.size();
  for (const Ranking& r : leaf.rankings) out << ' ' << format_ranking(r);
  out << '\n';
}

// Reads one subtree in preorder, appending to `nodes`; returns its index.
std::size_t read_subtree(Parser& p, std::vector<TreeNode>& nodes, std::size_t limit,
                         int label_count) {
  if (nodes.size() >= limit) p.fail("tree has more nodes than declared");
  const auto w = words(p.line());
  const std::size_t index = nodes.size();
  if (w.size() == 3 && w[0] == "N") {
    nodes.emplace_back(InternalNode{});
    const SplitRule rule{p.number<std::size_t>(w[1]), p.number<double>(w[2])};
    const std::size_t left = read_subtree(p, nodes, limit, label_count);
    const std::size_t right = read_subtree(p, nodes, limit, label_count);
    nodes[index] = InternalNode{rule, left, right};
  } else if (w.size() >= 2 && w[0] == "L") {
    const auto count = p.number<std::size_t>(w[1]);
    if (w.size() != count + 2) p.fail("leaf ranking count mismatch");
    LeafNode leaf;
    leaf.rankings.reserve(count);
    for (std::size_t i = 2; i < w.size(); ++i) {
      leaf.rankings.push_back(parse_ranking(w[i], label_count));
    }
    nodes.emplace_back(std::move(leaf));
  } else {
    p.fail("expected a node record");
  }
  return index;
}

}  // namespace

void write_model(std::ostream& out, const Forest& forest) {
  const ForestConfig& c = forest.config();
  std::ostringstream body;
  body << kMagic << ' ' << kVersion << '\n'
       << "config trees=" << c.tree_count << " depth=" << c.tree.max_depth
       << " entropy=" << text::shortest(c.tree.entropy_threshold)
       << " features=" << c.tree.features_per_node.value_or(0)
       << " min-node=" << c.tree.min_node_size << " seed=" << c.seed
       << " tie=" << tie_text(c.tie) << '\n'
       << "labels " << forest.label_count() << '\n'
       << "attributes ";
  const auto& names = forest.attribute_names();
  for (std::size_t i = 0; i < names.size(); ++i) body << (i ? "," : "") << names[i];
  body << '\n';
  for (const DecisionTree& tree : forest.trees()) {
    body << "tree " << tree.nodes().size() << '\n';
    for (const TreeNode& node : tree.nodes()) write_node(body, node);
  }
  const std::string text = body.str();
  out << text << "checksum " << hex64(fnv1a(text)) << '\n';
}

Forest read_model(std::istream& in) {
  const std::string all{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  if (all.compare(0, kMagic.size() + 1, std::string(kMagic) + " ") != 0) {
    throw InputError("not an LRRF model file (bad magic header)");
  }
  {
    const std::size_t eol = all.find('\n');
    const std::string_view version =
        std::string_view(all).substr(kMagic.size() + 1, eol == std::string::npos ? eol : eol - kMagic.size() - 1);
    if (version != std::to_string(kVersion)) {
      throw InputError("unsupported model version '" + std::string(version) + "'");
    }
  }

  // The last line must be the checksum of everything before it.
  if (all.empty() || all.back() != '\n') throw InputError("truncated model file");
  const std::size_t last = all.rfind('\n', all.size() - 2);
  const std::string_view tail = std::string_view(all).substr(last + 1, all.size() - last - 2);
  if (last == std::string::npos || tail.substr(0, 9) != "checksum ") {
    throw InputError("truncated model file (no checksum)");
  }
  const std::string_view body = std::string_view(all).substr(0, last + 1);
  if (tail.substr(9) != hex64(fnv1a(body))) throw InputError("model checksum mismatch");

  Parser p(body);
  p.line();

  ForestConfig config;
  {
    const auto w = words(p.line());
    if (w.size() != 8 || w[0] != "config") p.fail("expected config line");
    config.tree_count = p.number<std::size_t>(p.field(w[1], "trees"));
    config.tree.max_depth = p.number<int>(p.field(w[2], "depth"));
    config.tree.entropy_threshold = p.number<double>(p.field(w[3], "entropy"));
    const auto features = p.number<std::size_t>(p.field(w[4], "features"));
    if (features > 0) config.tree.features_per_node = features;
    config.tree.min_node_size = p.number<std::size_t>(p.field(w[5], "min-node"));
    config.seed = p.number<std::uint64_t>(p.field(w[6], "seed"));
    const std::string_view tie = p.field(w[7], "tie");
    if (tie == "lowest") {
      config.tie = TieBreakPolicy::lowest_label_index();
    } else if (tie.substr(0, 7) == "random:") {
      config.tie = TieBreakPolicy::seeded_random(p.number<std::uint64_t>(tie.substr(7)));
    } else {
      p.fail("unknown tie policy '" + std::string(tie) + "'");
    }
  }

  int label_count = 0;
  {
    const auto w = words(p.line());
    if (w.size() != 2 || w[0] != "labels") p.fail("expected 'labels M'");
    label_count = p.number<int>(w[1]);
    if (label_count < 2) p.fail("label count must be at least 2");
  }

  std::vector<std::string> names;
  {
    const std::string_view line = p.line();
    if (line.substr(0, 11) != "attributes ") p.fail("expected attribute names");
    for (const auto name : text::split(line.substr(11), ',')) {
      if (name.empty()) p.fail("empty attribute name");
      names.emplace_back(name);
    }
  }

  std::vector<DecisionTree> trees;
  while (!p.done()) {
    const auto w = words(p.line());
    if (w.size() != 2 || w[0] != "tree") p.fail("expected 'tree K'");
    const auto count = p.number<std::size_t>(w[1]);
    std::vector<TreeNode> nodes;
    nodes.reserve(count);
    read_subtree(p, nodes, count, label_count);
    if (nodes.size() != count) p.fail("tree has fewer nodes than declared");
    trees.emplace_back(names.size(), label_count, std::move(nodes));
  }
  return Forest(std::move(config), std::move(names), label_count, std::move(trees));
}

void save_model(const std::filesystem::path& path, const Forest& forest) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write model '" + path.string() + "'");
  write_model(out, forest);
  if (!out.flush()) throw InputError("failed writing model '" + path.string() + "'");
}

Forest load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open model '" + path.string() + "'");
  return read_model(in);
}

}  // namespace lrrf
