#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "oracles.hpp"
#include "temp_dir.hpp"
#include "tweetsignal/error.hpp"
#include "tweetsignal/naive_bayes.hpp"

using namespace tweetsignal;

namespace {

BinaryVector bv(std::initializer_list<int> bits) {
  BinaryVector v;
  for (int b : bits) v.bits.push_back(static_cast<std::uint8_t>(b));
  return v;
}

}  // namespace

TEST(NaiveBayes, LaplaceArithmetic) {
  const std::vector<BinaryVector> x{bv({1}), bv({0})};
  const std::vector<Label> y{Label::Positive, Label::Negative};
  const auto m = fit_nb(x, y, {1.0});
  EXPECT_NEAR(std::exp(m.table(Label::Positive).log_present[0]), 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(std::exp(m.table(Label::Negative).log_present[0]), 1.0 / 3.0, 1e-15);
  EXPECT_EQ(predict_nb(m, bv({1})).label, Label::Positive);
  EXPECT_EQ(predict_nb(m, bv({0})).label, Label::Negative);
}

TEST(NaiveBayes, SingleClassAlwaysPredicted) {
  const std::vector<BinaryVector> x{bv({1, 0}), bv({0, 1}), bv({1, 1})};
  const std::vector<Label> y(3, Label::Positive);
  const auto m = fit_nb(x, y);
  for (const auto& q : {bv({0, 0}), bv({1, 0}), bv({0, 1}), bv({1, 1})}) {
    EXPECT_EQ(predict_nb(m, q).label, Label::Positive);
  }
}

TEST(NaiveBayes, SymmetricModelTiesToNegative) {
  const std::vector<BinaryVector> x{bv({1, 0}), bv({1, 0})};
  const std::vector<Label> y{Label::Positive, Label::Negative};
  const auto m = fit_nb(x, y);
  for (const auto& q : {bv({0, 0}), bv({1, 0}), bv({0, 1}), bv({1, 1})}) {
    EXPECT_EQ(predict_nb(m, q).label, Label::Negative);
  }
}

TEST(NaiveBayes, ProbabilitiesSumToOne) {
  Rng rng(1);
  const auto x = tstest::random_rows(rng, 50, 12);
  const auto y = tstest::random_labels(rng, 50);
  const auto m = fit_nb(x, y, {0.5});
  EXPECT_NEAR(std::exp(m.class_log_prior()[0]) + std::exp(m.class_log_prior()[1]), 1.0, 1e-12);
  for (auto c : {Label::Negative, Label::Positive}) {
    for (std::size_t i = 0; i < 12; ++i) {
      EXPECT_NEAR(std::exp(m.table(c).log_present[i]) + std::exp(m.table(c).log_absent[i]), 1.0, 1e-12);
    }
  }
}

TEST(NaiveBayes, PosteriorMatchesBruteForceProduct) {
  Rng rng(2);
  for (int round = 0; round < 50; ++round) {
    const auto x = tstest::random_rows(rng, 8, 3);
    const auto y = tstest::random_labels(rng, 8);
    const auto m = fit_nb(x, y);
    for (const auto& q : tstest::random_rows(rng, 4, 3)) {
      const auto joint = tstest::nb_exact_joint(x, y, 1, q);
      const auto p = predict_nb(m, q);
      for (std::size_t c = 0; c < 2; ++c) {
        if (joint[c] == 0) {
          EXPECT_TRUE(std::isinf(p.log_posterior[c]));
        } else {
          EXPECT_NEAR(p.log_posterior[c], std::log(joint[c].convert_to<double>()), 1e-12);
        }
      }
    }
  }
}

TEST(NaiveBayes, ArgmaxMatchesExactOracle) {
  Rng rng(3);
  for (int round = 0; round < 200; ++round) {
    const std::size_t docs = 1 + rng.below(10), feats = 1 + rng.below(5);
    const auto x = tstest::random_rows(rng, docs, feats);
    const auto y = tstest::random_labels(rng, docs);
    const auto m = fit_nb(x, y);
    for (const auto& q : tstest::random_rows(rng, 8, feats)) {
      EXPECT_EQ(predict_nb(m, q).label, tstest::nb_exact_argmax(x, y, 1, q));
    }
  }
}

TEST(NaiveBayes, PermutationInvariant) {
  Rng rng(4);
  auto x = tstest::random_rows(rng, 30, 6);
  auto y = tstest::random_labels(rng, 30);
  const auto a = fit_nb(x, y);
  std::vector<std::size_t> order(30);
  for (std::size_t i = 0; i < 30; ++i) order[i] = i;
  rng.shuffle(order.begin(), order.end());
  std::vector<BinaryVector> px;
  std::vector<Label> py;
  for (auto i : order) {
    px.push_back(x[i]);
    py.push_back(y[i]);
  }
  EXPECT_EQ(fit_nb(px, py), a);
}

TEST(NaiveBayes, LargeAlphaFlattensLikelihoods) {
  Rng rng(5);
  const auto x = tstest::random_rows(rng, 40, 5);
  const auto y = tstest::random_labels(rng, 40);
  const auto m = fit_nb(x, y, {1e6});
  for (auto c : {Label::Negative, Label::Positive}) {
    for (double v : m.table(c).log_present) EXPECT_NEAR(v, std::log(0.5), 1e-3);
  }
}

TEST(NaiveBayes, ShiftingBothPosteriorsKeepsLabel) {
  Rng rng(6);
  const auto x = tstest::random_rows(rng, 20, 4);
  const auto y = tstest::random_labels(rng, 20);
  const auto m = fit_nb(x, y);
  for (double shift : {-50.0, -1.0, 3.0, 100.0}) {
    auto prior = m.class_log_prior();
    prior[0] += shift;
    prior[1] += shift;
    const NbModel shifted(prior, {m.table(Label::Negative), m.table(Label::Positive)}, m.alpha());
    for (const auto& q : tstest::random_rows(rng, 10, 4)) {
      EXPECT_EQ(predict_nb(shifted, q).label, predict_nb(m, q).label);
    }
  }
}

TEST(NaiveBayes, Errors) {
  const std::vector<BinaryVector> x{bv({1}), bv({0, 1})};
  const std::vector<Label> y{Label::Positive, Label::Negative};
  auto code = [](auto fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::Internal;
  };
  EXPECT_EQ(code([&] { fit_nb(x, y); }), ErrorCode::DimensionMismatch);
  EXPECT_EQ(code([&] { fit_nb(std::span(x).first(1), y); }), ErrorCode::DimensionMismatch);
  EXPECT_EQ(code([&] { fit_nb(std::span(x).first(1), std::span(y).first(1), {0.0}); }), ErrorCode::NonPositiveAlpha);
  const auto m = fit_nb(std::span(x).first(1), std::span(y).first(1));
  EXPECT_EQ(code([&] { predict_nb(m, bv({1, 1})); }), ErrorCode::DimensionMismatch);
}

TEST(NaiveBayes, SerializationIsExact) {
  Rng rng(7);
  const auto x = tstest::random_rows(rng, 60, 9);
  auto y = tstest::random_labels(rng, 60);
  for (auto& l : y) l = Label::Positive;  // absent class exercises -inf prior
  y[0] = Label::Negative;
  for (bool single : {false, true}) {
    if (single) y[0] = Label::Positive;
    const auto m = fit_nb(x, y, {0.37});
    std::stringstream s;
    m.write(s);
    const auto back = NbModel::read(s);
    EXPECT_EQ(back, m);
    std::stringstream again;
    back.write(again);
    std::stringstream first;
    m.write(first);
    EXPECT_EQ(again.str(), first.str());
  }
}
