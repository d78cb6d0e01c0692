#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "tweetsignal/corpus.hpp"
#include "tweetsignal/features.hpp"
#include "tweetsignal/rng.hpp"

namespace tweetsignal {

/// One node of a binary-feature decision tree, stored in a flat arena.
/// Split nodes send feature value 0 to `left` and 1 to `right`.
struct TreeNode {
  static constexpr std::int32_t kLeaf = -1;

  std::int32_t feature = kLeaf;
  std::uint32_t left = 0;
  std::uint32_t right = 0;
  Label label = Label::Negative;
  std::array<std::uint32_t, 2> class_counts{};

  bool is_leaf() const noexcept { return feature == kLeaf; }
  friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

struct TreeParams {
  std::size_t max_depth = 60;
  /// Features examined per split; 0 means ceil(sqrt(n_features)).
  std::size_t mtry = 0;
  std::size_t min_samples_leaf = 1;
};

class DecisionTree {
 public:
  DecisionTree() = default;
  /// `nodes[0]` is the root. Throws Error(ModelFormat) on dangling children.
  explicit DecisionTree(std::vector<TreeNode> nodes);

  const std::vector<TreeNode>& nodes() const noexcept { return nodes_; }
  const TreeNode& root() const { return nodes_.front(); }
  Label predict(const BinaryVector& x) const;
  /// Edges on the longest root-to-leaf path.
  std::size_t depth() const;

  friend bool operator==(const DecisionTree&, const DecisionTree&) = default;

 private:
  std::vector<TreeNode> nodes_;
};

/// Greedy CART on the rows listed in `rows` (duplicates allowed, as in a
/// bootstrap sample). At each node `mtry` distinct features are sampled and the
/// one with the lowest weighted Gini wins, ties to the lower feature index.
/// Growth stops on a pure node, at max_depth, with fewer than
/// 2 * min_samples_leaf rows, or when no candidate lowers impurity.
DecisionTree fit_tree(std::span<const BinaryVector> x, std::span<const Label> y,
                      std::span<const std::size_t> rows, const TreeParams& params, Rng& rng);

/// Convenience overload that uses every row once.
DecisionTree fit_tree(std::span<const BinaryVector> x, std::span<const Label> y,
                      const TreeParams& params, Rng& rng);

struct ForestParams {
  std::size_t n_estimators = 200;
  std::size_t max_depth = 60;
  std::size_t mtry = 0;
  std::size_t min_samples_leaf = 1;
  bool bootstrap = true;
  std::uint64_t seed = 0;
  /// Worker threads for training; 0 picks hardware concurrency. Does not
  /// affect the result.
  std::size_t n_threads = 0;
};

class Forest {
 public:
  inline static constexpr int kFormatVersion = 1;

  Forest(ForestParams params, std::size_t n_features, std::vector<DecisionTree> trees);

  const ForestParams& params() const noexcept { return params_; }
  std::size_t n_features() const noexcept { return n_features_; }
  const std::vector<DecisionTree>& trees() const noexcept { return trees_; }

  void write(std::ostream& out) const;
  static Forest read(std::istream& in);
  void save(const std::filesystem::path& path) const;
  static Forest load(const std::filesystem::path& path);

  friend bool operator==(const Forest& a, const Forest& b) {
    return a.n_features_ == b.n_features_ && a.trees_ == b.trees_ &&
           a.params_.n_estimators == b.params_.n_estimators &&
           a.params_.max_depth == b.params_.max_depth && a.params_.mtry == b.params_.mtry &&
           a.params_.min_samples_leaf == b.params_.min_samples_leaf &&
           a.params_.bootstrap == b.params_.bootstrap && a.params_.seed == b.params_.seed;
  }

 private:
  ForestParams params_;
  std::size_t n_features_;
  std::vector<DecisionTree> trees_;
};

/// Tree t is grown on a bootstrap sample drawn from the stream
/// derive_seed(seed, t); mtry 0 resolves to ceil(sqrt(n_features)).
Forest fit_forest(std::span<const BinaryVector> x, std::span<const Label> y, ForestParams params);

struct ForestPrediction {
  Label label = Label::Negative;
  std::array<std::size_t, 2> votes{};  ///< {negative, positive}
};

/// Majority vote over trees; a tie goes to Negative.
ForestPrediction predict_forest(const Forest& forest, const BinaryVector& x);

std::size_t default_mtry(std::size_t n_features);

}  // namespace tweetsignal
