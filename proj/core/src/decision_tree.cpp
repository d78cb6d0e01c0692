#include <algorithm>
#include <cmath>
#include <numeric>

#include "tweetsignal/error.hpp"
#include "tweetsignal/random_forest.hpp"

namespace tweetsignal {

namespace {

__extension__ typedef unsigned __int128 u128;

struct Counts {
  std::uint64_t neg = 0;
  std::uint64_t pos = 0;
  std::uint64_t total() const { return neg + pos; }
  std::uint64_t sum_sq() const { return neg * neg + pos * pos; }
};

// Candidate split as an exact rational score Q = num / den, where
// Q = sumsq_left / n_left + sumsq_right / n_right. Weighted child Gini is
// 1 - Q / n, so a larger Q means a purer split.
struct SplitScore {
  u128 num = 0;
  u128 den = 1;

  bool better_than(const SplitScore& other) const { return num * other.den > other.num * den; }
};

SplitScore score(const Counts& left, const Counts& right) {
  const u128 nl = left.total();
  const u128 nr = right.total();
  return {static_cast<u128>(left.sum_sq()) * nr + static_cast<u128>(right.sum_sq()) * nl, nl * nr};
}

Label majority(const Counts& c) { return label_from_bool(c.pos > c.neg); }

class TreeBuilder {
 public:
  TreeBuilder(std::span<const BinaryVector> x, std::span<const Label> y, const TreeParams& params,
              std::size_t mtry, Rng& rng)
      : x_(x), y_(y), params_(params), mtry_(mtry), rng_(rng), n_features_(x.empty() ? 0 : x[0].size()) {}

  std::vector<TreeNode> build(std::vector<std::size_t> rows) {
    grow(std::move(rows), 0);
    return std::move(nodes_);
  }

 private:
  std::uint32_t grow(std::vector<std::size_t> rows, std::size_t depth) {
    Counts here;
    for (auto r : rows) (y_[r] == Label::Positive ? here.pos : here.neg)++;

    const auto id = static_cast<std::uint32_t>(nodes_.size());
    nodes_.push_back({});
    auto make_leaf = [&] {
      auto& n = nodes_[id];
      n.feature = TreeNode::kLeaf;
      n.label = majority(here);
      n.class_counts = {static_cast<std::uint32_t>(here.neg), static_cast<std::uint32_t>(here.pos)};
      return id;
    };

    const std::size_t n = rows.size();
    if (here.neg == 0 || here.pos == 0 || depth >= params_.max_depth ||
        n < 2 * params_.min_samples_leaf) {
      return make_leaf();
    }

    // Parent score: sumsq / n, compared against the child score exactly.
    const SplitScore parent{here.sum_sq(), n};
    std::int32_t best_feature = TreeNode::kLeaf;
    SplitScore best = parent;
    for (const auto f : candidate_features()) {
      Counts on;
      for (auto r : rows) {
        if (x_[r].bits[f]) (y_[r] == Label::Positive ? on.pos : on.neg)++;
      }
      const Counts off{here.neg - on.neg, here.pos - on.pos};
      if (on.total() < params_.min_samples_leaf || off.total() < params_.min_samples_leaf ||
          on.total() == 0 || off.total() == 0) {
        continue;
      }
      const SplitScore s = score(off, on);
      // Candidates are visited in ascending index order, so a strict
      // comparison keeps the lowest index on ties.
      if (s.better_than(best)) {
        best = s;
        best_feature = static_cast<std::int32_t>(f);
      }
    }
    if (best_feature == TreeNode::kLeaf) return make_leaf();

    std::vector<std::size_t> left_rows, right_rows;
    for (auto r : rows) {
      (x_[r].bits[static_cast<std::size_t>(best_feature)] ? right_rows : left_rows).push_back(r);
    }
    rows.clear();
    rows.shrink_to_fit();
    const auto left = grow(std::move(left_rows), depth + 1);
    const auto right = grow(std::move(right_rows), depth + 1);
    auto& node = nodes_[id];
    node.feature = best_feature;
    node.left = left;
    node.right = right;
    node.label = majority(here);
    node.class_counts = {static_cast<std::uint32_t>(here.neg), static_cast<std::uint32_t>(here.pos)};
    return id;
  }

  // `mtry` distinct feature indices in ascending order (Floyd's sampling).
  std::vector<std::size_t> candidate_features() {
    std::vector<std::size_t> out;
    if (mtry_ >= n_features_) {
      out.resize(n_features_);
      std::iota(out.begin(), out.end(), std::size_t{0});
      return out;
    }
    out.reserve(mtry_);
    for (std::size_t j = n_features_ - mtry_; j < n_features_; ++j) {
      const auto t = static_cast<std::size_t>(rng_.below(j + 1));
      if (std::find(out.begin(), out.end(), t) == out.end()) {
        out.push_back(t);
      } else {
        out.push_back(j);
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  std::span<const BinaryVector> x_;
  std::span<const Label> y_;
  const TreeParams& params_;
  std::size_t mtry_;
  Rng& rng_;
  std::size_t n_features_;
  std::vector<TreeNode> nodes_;
};

void check_dimensions(std::span<const BinaryVector> x, std::span<const Label> y) {
  if (x.size() != y.size()) {
    throw Error(ErrorCode::DimensionMismatch, "x has " + std::to_string(x.size()) + " rows, y has " +
                                                  std::to_string(y.size()));
  }
  if (x.empty()) throw Error(ErrorCode::DimensionMismatch, "no training rows");
  const std::size_t d = x[0].size();
  for (std::size_t r = 0; r < x.size(); ++r) {
    if (x[r].size() != d) {
      throw Error(ErrorCode::DimensionMismatch, "row " + std::to_string(r) + " has " +
                                                    std::to_string(x[r].size()) + " features, expected " +
                                                    std::to_string(d));
    }
  }
}

}  // namespace

std::size_t default_mtry(std::size_t n_features) {
  if (n_features == 0) return 0;
  auto m = static_cast<std::size_t>(std::sqrt(static_cast<double>(n_features)));
  while (m * m < n_features) ++m;
  while (m > 1 && (m - 1) * (m - 1) >= n_features) --m;
  return m;
}

DecisionTree::DecisionTree(std::vector<TreeNode> nodes) : nodes_(std::move(nodes)) {
  if (nodes_.empty()) throw Error(ErrorCode::ModelFormat, "tree has no nodes");
  for (const auto& n : nodes_) {
    if (!n.is_leaf() && (n.left >= nodes_.size() || n.right >= nodes_.size())) {
      throw Error(ErrorCode::ModelFormat, "tree node points outside the tree");
    }
  }
}

Label DecisionTree::predict(const BinaryVector& x) const {
  const TreeNode* node = &nodes_.front();
  while (!node->is_leaf()) {
    const auto f = static_cast<std::size_t>(node->feature);
    if (f >= x.size()) throw Error(ErrorCode::DimensionMismatch, "feature index beyond input length");
    node = &nodes_[x.bits[f] ? node->right : node->left];
  }
  return node->label;
}

std::size_t DecisionTree::depth() const {
  std::size_t deepest = 0;
  std::vector<std::pair<std::uint32_t, std::size_t>> stack{{0, 0}};
  while (!stack.empty()) {
    const auto [id, d] = stack.back();
    stack.pop_back();
    deepest = std::max(deepest, d);
    const auto& n = nodes_[id];
    if (!n.is_leaf()) {
      stack.push_back({n.left, d + 1});
      stack.push_back({n.right, d + 1});
    }
  }
  return deepest;
}

DecisionTree fit_tree(std::span<const BinaryVector> x, std::span<const Label> y,
                      std::span<const std::size_t> rows, const TreeParams& params, Rng& rng) {
  check_dimensions(x, y);
  if (rows.empty()) throw Error(ErrorCode::DimensionMismatch, "empty row sample");
  for (auto r : rows) {
    if (r >= x.size()) throw Error(ErrorCode::DimensionMismatch, "row index out of range");
  }
  if (params.min_samples_leaf == 0) {
    throw Error(ErrorCode::InvalidArgument, "min_samples_leaf must be at least 1");
  }
  const std::size_t mtry = params.mtry == 0 ? default_mtry(x[0].size()) : params.mtry;
  TreeBuilder builder(x, y, params, mtry, rng);
  return DecisionTree(builder.build({rows.begin(), rows.end()}));
}

DecisionTree fit_tree(std::span<const BinaryVector> x, std::span<const Label> y,
                      const TreeParams& params, Rng& rng) {
  std::vector<std::size_t> rows(x.size());
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  return fit_tree(x, y, rows, params, rng);
}

}  // namespace tweetsignal
