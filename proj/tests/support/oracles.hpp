#pragma once

// Slow, direct reimplementations used to check the library. None of these
// call into the code they check, apart from reading model parameters.

#include <array>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "tweetsignal/features.hpp"
#include "tweetsignal/lstm.hpp"
#include "tweetsignal/random_forest.hpp"
#include "tweetsignal/rng.hpp"
#include "tweetsignal/signals.hpp"

namespace tstest {

using Rational = boost::multiprecision::cpp_rational;
using tweetsignal::BinaryVector;
using tweetsignal::Label;

std::vector<BinaryVector> random_rows(tweetsignal::Rng& rng, std::size_t rows, std::size_t cols, double p_one = 0.5);
std::vector<Label> random_labels(tweetsignal::Rng& rng, std::size_t rows);

/// Joint P(c) * prod_i P(x_i | c) in exact arithmetic, Laplace-smoothed with
/// `alpha`, priors from class frequencies.
std::array<Rational, 2> nb_exact_joint(std::span<const BinaryVector> x, std::span<const Label> y,
                                       const Rational& alpha, const BinaryVector& query);
/// Argmax of nb_exact_joint, ties to Negative.
Label nb_exact_argmax(std::span<const BinaryVector> x, std::span<const Label> y, const Rational& alpha,
                      const BinaryVector& query);

/// Exhaustive CART over all features: at each node every feature is tried, the
/// split with the lowest weighted Gini wins (lowest index on ties) if it is
/// strictly below the parent's Gini.
class CartOracle {
 public:
  CartOracle(std::span<const BinaryVector> x, std::span<const Label> y, std::size_t max_depth,
             std::size_t min_samples_leaf);
  ~CartOracle();
  CartOracle(CartOracle&&) noexcept;
  Label predict(const BinaryVector& q) const;
  std::size_t depth() const;

  struct Node;

 private:
  std::unique_ptr<Node> root_;
};

/// Gini impurity of a node with the given class counts, exactly.
Rational gini(std::size_t neg, std::size_t pos);

/// Walks one tree's node array directly.
Label walk_tree(const tweetsignal::DecisionTree& tree, const BinaryVector& q);
/// Majority over walk_tree for each tree, ties to Negative.
tweetsignal::ForestPrediction vote_oracle(const tweetsignal::Forest& forest, const BinaryVector& q);

/// Scalar loop forward pass reading parameters through the tensor table.
double lstm_oracle_forward(const tweetsignal::LstmNetwork& net, const tweetsignal::TokenSequence& seq);
double bce_oracle(double p, Label y);

/// Literal scan: for each return, advance j over sentiment days until one is on
/// or after the return's date; pair with j-1 when 1 <= j < n.
std::vector<tweetsignal::AlignedPair> align_trace(std::span<const tweetsignal::DailyReturn> returns,
                                                  std::span<const tweetsignal::DailySentiment> sentiment);

/// Textbook one-pass Pearson in long double.
long double pearson_oracle(std::span<const double> xs, std::span<const double> ys);

}  // namespace tstest

namespace tstest {

struct GradientCheck {
  double max_relative_error = 0;
  std::size_t worst_parameter = 0;
  std::size_t parameters = 0;
};

/// Analytic gradient of the summed loss (accumulate_gradient) against central
/// differences of the oracle loss. Relative error per parameter is
/// |a - n| / max(|a| + |n|, floor).
GradientCheck gradient_check(const tweetsignal::LstmNetwork& net, std::span<const tweetsignal::LstmExample> data,
                             double h = 1e-5, double floor = 1e-7);

/// Random network with every parameter drawn from U(-scale, scale).
tweetsignal::LstmNetwork random_network(const tweetsignal::LstmConfig& config, std::uint64_t seed, double scale);

}  // namespace tstest
