#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "tweetsignal/error.hpp"
#include "tweetsignal/lstm.hpp"

using namespace tweetsignal;
using tstest::planted;
using tstest::random_sequence;

namespace {

LstmConfig small_config() { return LstmConfig{5, 3, 4, 2, 2}; }

}  // namespace

TEST(Lstm, ZeroNetworkOutputsHalf) {
  const LstmNetwork net(LstmConfig{10, 4, 6, 3, 2});
  Rng rng(1);
  const auto s = random_sequence(rng, net.config());
  EXPECT_EQ(forward(net, s), 0.5);
  EXPECT_EQ(predict_label(net, s), Label::Positive);
  EXPECT_EQ(predict_label(net, s, 1.0), Label::Negative);
}

TEST(Lstm, ParameterCountAndLayout) {
  const LstmConfig c{5000, 32, 30, 64, 24};
  const LstmNetwork net(c);
  const std::size_t per_direction = 256 * 32 + 256 * 64 + 256;
  EXPECT_EQ(net.parameter_count(), 5001 * 32 + 2 * per_direction + 24 * 128 + 24 + 24 + 1);
  EXPECT_EQ(net.tensor(LstmNetwork::kDense1W).rows(), 24);
  EXPECT_EQ(net.tensor(LstmNetwork::kDense1W).cols(), 128);
}

TEST(Lstm, ZeroEmbeddingsMakeInputIrrelevant) {
  auto net = LstmNetwork::initialized(LstmConfig{8, 3, 5, 4, 3}, 5);
  net.tensor(LstmNetwork::kEmbedding).setZero();
  net.tensor(LstmNetwork::kForwardB).setZero();
  net.tensor(LstmNetwork::kBackwardB).setZero();
  Rng rng(2);
  const TokenSequence pad{std::vector<std::int32_t>(5, 0)};
  for (int i = 0; i < 10; ++i) EXPECT_EQ(forward(net, random_sequence(rng, net.config())), forward(net, pad));
}

TEST(Lstm, MatchesUnrolledOracle) {
  Rng rng(3);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto net = tstest::random_network(small_config(), seed, 1.0);
    for (int i = 0; i < 10; ++i) {
      const auto s = random_sequence(rng, net.config());
      const double want = tstest::lstm_oracle_forward(net, s);
      EXPECT_NEAR(forward(net, s), want, 1e-10);
      EXPECT_EQ(predict_label(net, s), label_from_bool(want >= 0.5));
    }
  }
}

TEST(Lstm, OutputStrictlyInsideUnitInterval) {
  auto net = tstest::random_network(small_config(), 4, 50.0);
  Rng rng(4);
  for (int i = 0; i < 50; ++i) {
    const double p = forward(net, random_sequence(rng, net.config()));
    EXPECT_GT(p, 0.0);
    EXPECT_LT(p, 1.0);
  }
}

TEST(Lstm, ReversalSymmetry) {
  auto net = tstest::random_network(small_config(), 6, 0.8);
  auto swapped = net;
  for (auto [a, b] : {std::pair{LstmNetwork::kForwardW, LstmNetwork::kBackwardW},
                      std::pair{LstmNetwork::kForwardU, LstmNetwork::kBackwardU},
                      std::pair{LstmNetwork::kForwardB, LstmNetwork::kBackwardB}}) {
    swapped.tensor(a) = net.tensor(b);
    swapped.tensor(b) = net.tensor(a);
  }
  // Dense1 columns see [forward | backward]; swap the halves too.
  const auto h = static_cast<Eigen::Index>(net.config().hidden);
  swapped.tensor(LstmNetwork::kDense1W).leftCols(h) = net.tensor(LstmNetwork::kDense1W).rightCols(h);
  swapped.tensor(LstmNetwork::kDense1W).rightCols(h) = net.tensor(LstmNetwork::kDense1W).leftCols(h);
  Rng rng(6);
  for (int i = 0; i < 20; ++i) {
    const auto s = random_sequence(rng, net.config(), false);
    TokenSequence r{std::vector<std::int32_t>(s.ids.rbegin(), s.ids.rend())};
    EXPECT_NEAR(forward(swapped, r), forward(net, s), 1e-14);
  }
}

TEST(Lstm, BceExamples) {
  EXPECT_NEAR(bce_loss(0.5, Label::Positive), std::log(2.0), 1e-15);
  EXPECT_NEAR(bce_loss(0.5, Label::Negative), std::log(2.0), 1e-15);
  EXPECT_NEAR(bce_loss(0.9, Label::Negative), 2.302585092994046, 1e-12);
  EXPECT_NEAR(bce_loss(1.0, Label::Positive), 0.0, 1e-11);
  EXPECT_NEAR(bce_loss(0.0, Label::Negative), 0.0, 1e-11);
  EXPECT_NEAR(bce_loss(0.0, Label::Positive), -std::log(1e-12), 1e-9);
}

TEST(Lstm, GradientMatchesFiniteDifferences) {
  const LstmConfig c{6, 3, 5, 3, 3};
  Rng rng(7);
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const auto net = tstest::random_network(c, 100 + seed, 0.5);
    ASSERT_LE(net.parameter_count(), 500u);
    std::vector<LstmExample> data;
    for (int i = 0; i < 10; ++i) data.push_back({random_sequence(rng, c), label_from_bool(rng.below(2) == 1)});
    const auto check = tstest::gradient_check(net, data);
    EXPECT_LT(check.max_relative_error, 1e-4) << "parameter " << check.worst_parameter;
  }
}

TEST(Lstm, ZeroLearningRateKeepsParameters) {
  auto net = LstmNetwork::initialized(LstmConfig{20, 4, 6, 3, 2}, 9);
  const auto before = net;
  TrainOptions o;
  o.adam.learning_rate = 0;
  o.epochs = 2;
  const auto data = planted(40, 20, 6, 1);
  train(net, data, o);
  EXPECT_TRUE(net == before);
}

TEST(Lstm, OverfitsOneSample) {
  auto net = LstmNetwork::initialized(LstmConfig{20, 8, 6, 8, 4}, 10);
  const auto data = planted(1, 20, 6, 2);
  TrainOptions o;
  o.epochs = 200;
  o.validation_split = 0;
  o.adam.learning_rate = 0.01;
  const auto h = train(net, data, o);
  ASSERT_EQ(h.epochs.size(), 200u);
  EXPECT_LT(evaluate(net, data).first, 0.01);
  EXPECT_TRUE(std::isnan(h.epochs.back().val_loss));
}

TEST(Lstm, LearnsPlantedToken) {
  auto net = LstmNetwork::initialized(LstmConfig{30, 16, 8, 16, 8}, 11);
  const auto data = planted(500, 30, 8, 3);
  TrainOptions o;
  o.epochs = 2;
  o.batch_size = 8;
  o.adam.learning_rate = 0.01;
  o.seed = 5;
  const double initial = evaluate(net, std::span(data).first(450)).first;
  const auto h = train(net, data, o);
  ASSERT_EQ(h.epochs.size(), 2u);
  EXPECT_GE(h.epochs.back().val_accuracy, 0.9);
  EXPECT_LT(evaluate(net, std::span(data).first(450)).first, initial);
}

TEST(Lstm, TrainingIsDeterministic) {
  const auto data = planted(120, 15, 6, 4);
  TrainOptions o;
  o.epochs = 3;
  o.batch_size = 16;
  o.seed = 12;
  auto a = LstmNetwork::initialized(LstmConfig{15, 4, 6, 5, 3}, 1);
  auto b = a;
  std::size_t calls = 0;
  o.on_epoch = [&](std::size_t, const EpochStats&) { ++calls; };
  const auto ha = train(a, data, o);
  const auto hb = train(b, data, o);
  EXPECT_EQ(calls, 6u);
  EXPECT_EQ(ha, hb);
  EXPECT_TRUE(a == b);
  for (double p : a.parameters()) ASSERT_TRUE(std::isfinite(p));
}

TEST(Lstm, SerializationPreservesOutputs) {
  const auto net = LstmNetwork::initialized(LstmConfig{12, 5, 6, 4, 3}, 13);
  std::stringstream s;
  net.write(s);
  const auto back = LstmNetwork::read(s);
  EXPECT_TRUE(back == net);
  Rng rng(13);
  for (int i = 0; i < 10; ++i) {
    const auto seq = random_sequence(rng, net.config());
    EXPECT_NEAR(forward(back, seq), forward(net, seq), 1e-15);
  }
  std::stringstream bad("tweetsignal-lstm 2\n");
  try {
    LstmNetwork::read(bad);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ModelVersionMismatch);
  }
}

TEST(Lstm, Errors) {
  const LstmNetwork net(LstmConfig{5, 2, 3, 2, 2});
  auto code = [](auto fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::Internal;
  };
  EXPECT_EQ(code([&] { forward(net, TokenSequence{{1, 2, 6}}); }), ErrorCode::IdOutOfRange);
  EXPECT_EQ(code([&] { forward(net, TokenSequence{{1, -1, 0}}); }), ErrorCode::IdOutOfRange);
  EXPECT_EQ(code([&] { forward(net, TokenSequence{{1, 2}}); }), ErrorCode::DimensionMismatch);
  auto copy = net;
  EXPECT_EQ(code([&] { train(copy, {}, TrainOptions{}); }), ErrorCode::EmptyData);
  TrainOptions bad;
  bad.validation_split = 0.7;
  const std::vector<LstmExample> one{{TokenSequence{{1, 2, 3}}, Label::Positive}};
  EXPECT_EQ(code([&] { train(copy, one, bad); }), ErrorCode::InvalidArgument);
}
