#include "tweetsignal/random_forest.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <thread>

#include "tweetsignal/error.hpp"
#include "tweetsignal/number_io.hpp"

namespace tweetsignal {

namespace {

constexpr std::string_view kMagic = "tweetsignal-forest";

void write_tree(std::ostream& out, const DecisionTree& tree, std::uint32_t id) {
  const auto& n = tree.nodes()[id];
  if (n.is_leaf()) {
    out << "L " << to_int(n.label) << ' ' << n.class_counts[0] << ' ' << n.class_counts[1] << '\n';
    return;
  }
  out << "S " << n.feature << ' ' << to_int(n.label) << ' ' << n.class_counts[0] << ' ' << n.class_counts[1]
      << '\n';
  write_tree(out, tree, n.left);
  write_tree(out, tree, n.right);
}

class TreeReader {
 public:
  TreeReader(std::istream& in, std::size_t n_features) : in_(in), n_features_(n_features) {}

  DecisionTree read() {
    nodes_.clear();
    read_node(0);
    return DecisionTree(std::move(nodes_));
  }

 private:
  std::uint32_t read_node(std::size_t depth) {
    if (depth > 100000) throw Error(ErrorCode::ModelFormat, "tree too deep");
    std::string line;
    if (!std::getline(in_, line)) throw Error(ErrorCode::ModelFormat, "forest truncated inside a tree");
    std::istringstream ss(line);
    std::string kind;
    ss >> kind;
    const auto id = static_cast<std::uint32_t>(nodes_.size());
    nodes_.push_back({});
    if (kind == "L") {
      int label = -1;
      std::uint32_t c0 = 0, c1 = 0;
      if (!(ss >> label >> c0 >> c1) || (label != 0 && label != 1)) {
        throw Error(ErrorCode::ModelFormat, "bad leaf line '" + line + "'");
      }
      nodes_[id].label = static_cast<Label>(label);
      nodes_[id].class_counts = {c0, c1};
      return id;
    }
    std::int64_t feature = -1;
    int label = -1;
    std::uint32_t c0 = 0, c1 = 0;
    if (kind != "S" || !(ss >> feature >> label >> c0 >> c1) || feature < 0 ||
        static_cast<std::size_t>(feature) >= n_features_ || (label != 0 && label != 1)) {
      throw Error(ErrorCode::ModelFormat, "bad split line '" + line + "'");
    }
    nodes_[id].label = static_cast<Label>(label);
    nodes_[id].class_counts = {c0, c1};
    const auto left = read_node(depth + 1);
    const auto right = read_node(depth + 1);
    nodes_[id].feature = static_cast<std::int32_t>(feature);
    nodes_[id].left = left;
    nodes_[id].right = right;
    return id;
  }

  std::istream& in_;
  std::size_t n_features_;
  std::vector<TreeNode> nodes_;
};

}  // namespace

Forest::Forest(ForestParams params, std::size_t n_features, std::vector<DecisionTree> trees)
    : params_(params), n_features_(n_features), trees_(std::move(trees)) {
  if (trees_.size() != params_.n_estimators) {
    throw Error(ErrorCode::Internal, "forest holds " + std::to_string(trees_.size()) +
                                         " trees, expected " + std::to_string(params_.n_estimators));
  }
}

Forest fit_forest(std::span<const BinaryVector> x, std::span<const Label> y, ForestParams params) {
  if (x.size() != y.size() || x.empty()) {
    throw Error(ErrorCode::DimensionMismatch, "forest needs equal, non-zero row counts");
  }
  if (params.n_estimators == 0) throw Error(ErrorCode::InvalidArgument, "n_estimators must be positive");
  const std::size_t n_features = x[0].size();
  if (params.mtry == 0) params.mtry = std::max<std::size_t>(1, default_mtry(n_features));

  const TreeParams tree_params{params.max_depth, params.mtry, params.min_samples_leaf};
  std::vector<DecisionTree> trees(params.n_estimators);

  auto train_one = [&](std::size_t t) {
    Rng rng(derive_seed(params.seed, t));
    std::vector<std::size_t> rows(x.size());
    if (params.bootstrap) {
      for (auto& r : rows) r = static_cast<std::size_t>(rng.below(x.size()));
    } else {
      for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
    }
    trees[t] = fit_tree(x, y, rows, tree_params, rng);
  };

  std::size_t workers = params.n_threads == 0 ? std::thread::hardware_concurrency() : params.n_threads;
  workers = std::clamp<std::size_t>(workers, 1, params.n_estimators);
  if (workers == 1) {
    for (std::size_t t = 0; t < params.n_estimators; ++t) train_one(t);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    {
      std::vector<std::jthread> pool;
      for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
          while (!failed.load()) {
            const std::size_t t = next.fetch_add(1);
            if (t >= params.n_estimators) return;
            try {
              train_one(t);
            } catch (...) {
              if (!failed.exchange(true)) failure = std::current_exception();
            }
          }
        });
      }
    }
    if (failure) std::rethrow_exception(failure);
  }
  return Forest(params, n_features, std::move(trees));
}

ForestPrediction predict_forest(const Forest& forest, const BinaryVector& x) {
  if (x.size() != forest.n_features()) {
    throw Error(ErrorCode::DimensionMismatch, "input has " + std::to_string(x.size()) +
                                                  " features, forest expects " +
                                                  std::to_string(forest.n_features()));
  }
  ForestPrediction out;
  for (const auto& tree : forest.trees()) ++out.votes[static_cast<std::size_t>(tree.predict(x))];
  out.label = label_from_bool(out.votes[1] > out.votes[0]);
  return out;
}

void Forest::write(std::ostream& out) const {
  out << kMagic << ' ' << kFormatVersion << '\n';
  out << "n_features " << n_features_ << '\n';
  out << "n_estimators " << params_.n_estimators << '\n';
  out << "max_depth " << params_.max_depth << '\n';
  out << "mtry " << params_.mtry << '\n';
  out << "min_samples_leaf " << params_.min_samples_leaf << '\n';
  out << "bootstrap " << (params_.bootstrap ? 1 : 0) << '\n';
  out << "seed " << params_.seed << '\n';
  for (std::size_t t = 0; t < trees_.size(); ++t) {
    out << "tree " << t << '\n';
    write_tree(out, trees_[t], 0);
  }
}

Forest Forest::read(std::istream& in) {
  std::string line;
  auto header_value = [&](std::string_view key) -> std::uint64_t {
    if (!std::getline(in, line)) throw Error(ErrorCode::ModelFormat, "forest header truncated");
    std::istringstream ss(line);
    std::string k;
    std::uint64_t v = 0;
    if (!(ss >> k >> v) || k != key) {
      throw Error(ErrorCode::ModelFormat, "expected '" + std::string(key) + "' in forest header");
    }
    return v;
  };
  if (!std::getline(in, line)) throw Error(ErrorCode::ModelFormat, "empty forest file");
  {
    std::istringstream ss(line);
    std::string magic;
    int version = 0;
    if (!(ss >> magic >> version) || magic != kMagic) throw Error(ErrorCode::ModelFormat, "not a forest file");
    if (version != kFormatVersion) {
      throw Error(ErrorCode::ModelVersionMismatch, "forest version " + std::to_string(version) +
                                                       ", expected " + std::to_string(kFormatVersion));
    }
  }
  const std::size_t n_features = header_value("n_features");
  ForestParams p;
  p.n_estimators = header_value("n_estimators");
  p.max_depth = header_value("max_depth");
  p.mtry = header_value("mtry");
  p.min_samples_leaf = header_value("min_samples_leaf");
  p.bootstrap = header_value("bootstrap") != 0;
  p.seed = header_value("seed");

  std::vector<DecisionTree> trees;
  TreeReader reader(in, n_features);
  for (std::size_t t = 0; t < p.n_estimators; ++t) {
    if (!std::getline(in, line) || line != "tree " + std::to_string(t)) {
      throw Error(ErrorCode::ModelFormat, "expected 'tree " + std::to_string(t) + "'");
    }
    trees.push_back(reader.read());
  }
  return Forest(p, n_features, std::move(trees));
}

void Forest::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  write(out);
}

Forest Forest::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  return read(in);
}

}  // namespace tweetsignal
