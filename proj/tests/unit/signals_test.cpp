#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "oracles.hpp"
#include "tweetsignal/error.hpp"
#include "tweetsignal/signals.hpp"

using namespace tweetsignal;

namespace {

ClassifiedTweet tweet(Date d, Label all) { return {{"x", d, "t"}, all, all, all}; }

std::vector<OhlcBar> bars_from(const std::vector<double>& closes, Date start = Date::from_ymd(2020, 4, 6)) {
  std::vector<OhlcBar> out;
  for (std::size_t i = 0; i < closes.size(); ++i) {
    out.push_back({start.plus_days(static_cast<int>(i)), closes[i], closes[i], closes[i], closes[i], closes[i], 1});
  }
  return out;
}

DailySentiment day(Date d, double b) { return {d, {b, b, b}, {}}; }

ErrorCode code_of(auto fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::Internal;
}

}  // namespace

TEST(Bullishness, Formula) {
  EXPECT_NEAR(bullishness(9, 4), std::log(2.0), 1e-12);
  EXPECT_EQ(bullishness(3, 3), 0.0);
  EXPECT_NEAR(bullishness(1, 0), 0.6931471805599453, 1e-15);
  EXPECT_NEAR(bullishness(0, 1), -0.6931471805599453, 1e-15);
}

TEST(Bullishness, SeriesGroupsByDay) {
  const auto d1 = Date::from_ymd(2020, 4, 9), d2 = Date::from_ymd(2020, 4, 10);
  std::vector<ClassifiedTweet> tweets;
  for (int i = 0; i < 9; ++i) tweets.push_back(tweet(d2, Label::Positive));
  for (int i = 0; i < 4; ++i) tweets.push_back(tweet(d2, Label::Negative));
  tweets.push_back(tweet(d1, Label::Negative));
  tweets.back().rf = Label::Positive;
  const auto s = bullishness_series(tweets);
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[0].date, d1);
  EXPECT_NEAR(at(s[0].bullishness, Model::Rf), std::log(2.0), 1e-15);
  EXPECT_NEAR(at(s[0].bullishness, Model::Nb), -std::log(2.0), 1e-15);
  EXPECT_NEAR(at(s[1].bullishness, Model::Lstm), std::log(2.0), 1e-12);
  EXPECT_EQ(at(s[1].counts, Model::Nb).positive, 9u);
}

TEST(Bullishness, AntisymmetryAndMonotonicity) {
  Rng rng(1);
  for (int round = 0; round < 100; ++round) {
    std::vector<ClassifiedTweet> tweets, flipped;
    const auto d = Date::from_ymd(2021, 1, 1);
    for (std::size_t k = 1 + rng.below(30); k > 0; --k) {
      ClassifiedTweet t{{"i", d, "t"}, label_from_bool(rng.below(2)), label_from_bool(rng.below(2)),
                        label_from_bool(rng.below(2))};
      tweets.push_back(t);
      auto flip = [](std::optional<Label> l) { return label_from_bool(*l == Label::Negative); };
      flipped.push_back({t.record, flip(t.nb), flip(t.rf), flip(t.lstm)});
    }
    const auto a = bullishness_series(tweets);
    const auto b = bullishness_series(flipped);
    for (auto m : kModels) EXPECT_NEAR(at(a[0].bullishness, m), -at(b[0].bullishness, m), 1e-15);
    tweets.push_back(tweet(d, Label::Positive));
    const auto up = bullishness_series(tweets);
    tweets.back() = tweet(d, Label::Negative);
    const auto down = bullishness_series(tweets);
    for (auto m : kModels) {
      EXPECT_GT(at(up[0].bullishness, m), at(a[0].bullishness, m));
      EXPECT_LT(at(down[0].bullishness, m), at(a[0].bullishness, m));
    }
  }
}

TEST(Bullishness, MissingLabelIsAnError) {
  std::vector<ClassifiedTweet> tweets{tweet(Date::from_ymd(2020, 1, 1), Label::Positive)};
  tweets[0].lstm.reset();
  EXPECT_EQ(code_of([&] { bullishness_series(tweets); }), ErrorCode::MissingModelLabel);
}

TEST(Returns, Examples) {
  EXPECT_EQ(return_series(bars_from({100, 100}))[0].value, 0.0);
  EXPECT_NEAR(return_series(bars_from({100, 200}))[0].value, 69.31471805599453, 1e-9);
  EXPECT_NEAR(return_series(bars_from({100, 90}))[0].value, -10.536051565782628, 1e-9);
  const auto r = return_series(bars_from({1, 2, 3}));
  ASSERT_EQ(r.size(), 2u);
  EXPECT_EQ(r[0].date, Date::from_ymd(2020, 4, 7));
  EXPECT_EQ(r[1].date, Date::from_ymd(2020, 4, 8));
}

TEST(Returns, Telescoping) {
  Rng rng(2);
  for (int round = 0; round < 100; ++round) {
    std::vector<double> closes;
    for (std::size_t k = 2 + rng.below(200); k > 0; --k) closes.push_back(std::exp(rng.uniform(-3, 6)));
    double sum = 0;
    for (const auto& r : return_series(bars_from(closes))) sum += r.value;
    EXPECT_NEAR(sum, 100 * (std::log(closes.back()) - std::log(closes.front())), 1e-9);
  }
}

TEST(Returns, Errors) {
  EXPECT_EQ(code_of([] { return_series(bars_from({100})); }), ErrorCode::TooFewBars);
  EXPECT_EQ(code_of([] { return_series(bars_from({100, 0})); }), ErrorCode::NonPositiveClose);
  auto unsorted = bars_from({1, 2});
  std::swap(unsorted[0], unsorted[1]);
  EXPECT_EQ(code_of([&] { return_series(unsorted); }), ErrorCode::UnsortedInput);
}

TEST(Align, HandTracedExamples) {
  const auto apr = [](unsigned d) { return Date::from_ymd(2020, 4, d); };
  const std::vector<DailySentiment> s{day(apr(9), 1), day(apr(10), 2), day(apr(11), 3)};
  const std::vector<DailyReturn> on_11{{apr(11), 0.5}};
  auto pairs = align(on_11, s);
  ASSERT_EQ(pairs.size(), 1u);
  EXPECT_EQ(pairs[0].sentiment_date, apr(10));
  EXPECT_EQ(pairs[0].return_date, apr(11));
  EXPECT_EQ(at(pairs[0].bullishness, Model::Nb), 2);

  EXPECT_TRUE(align(std::vector<DailyReturn>{{apr(8), 1}}, s).empty());
  EXPECT_TRUE(align(std::vector<DailyReturn>{{apr(9), 1}}, s).empty());
  EXPECT_TRUE(align(std::vector<DailyReturn>{{apr(12), 1}}, s).empty());

  // Monday return after a weekend of tweets pairs with Sunday.
  const std::vector<DailySentiment> weekend{day(apr(10), 1), day(apr(11), 2), day(apr(12), 3), day(apr(14), 4)};
  pairs = align(std::vector<DailyReturn>{{apr(13), 1}}, weekend);
  ASSERT_EQ(pairs.size(), 1u);
  EXPECT_EQ(pairs[0].sentiment_date, apr(12));
}

TEST(Align, MatchesLoopTrace) {
  Rng rng(3);
  for (int round = 0; round < 300; ++round) {
    const auto start = Date::from_ymd(2022, 1, 1).plus_days(static_cast<int>(rng.below(7)));
    std::vector<DailySentiment> s;
    std::vector<DailyReturn> r;
    for (int d = 0; d < 40; ++d) {
      if (rng.below(3)) s.push_back(day(start.plus_days(d), rng.uniform(-1, 1)));
      const auto rd = start.plus_days(d + static_cast<int>(rng.below(3)) - 1);
      if (!rd.is_weekend() && rng.below(4) && (r.empty() || r.back().date < rd)) r.push_back({rd, rng.uniform(-2, 2)});
    }
    const auto got = align(r, s);
    const auto want = tstest::align_trace(r, s);
    ASSERT_EQ(got.size(), want.size());
    for (std::size_t i = 0; i < got.size(); ++i) {
      EXPECT_EQ(got[i].sentiment_date, want[i].sentiment_date);
      EXPECT_EQ(got[i].return_date, want[i].return_date);
      EXPECT_EQ(got[i].bullishness, want[i].bullishness);
      EXPECT_EQ(got[i].return_value, want[i].return_value);
      EXPECT_LT(got[i].sentiment_date, got[i].return_date);
      if (i) EXPECT_LT(got[i - 1].return_date, got[i].return_date);
    }
  }
}

TEST(Align, SameDayMode) {
  const auto d = [](unsigned k) { return Date::from_ymd(2020, 4, k); };
  const std::vector<DailySentiment> s{day(d(9), 1), day(d(10), 2)};
  const std::vector<DailyReturn> r{{d(8), 0}, {d(10), 1}, {d(13), 2}};
  const auto pairs = align(r, s, AlignMode::SameDay);
  ASSERT_EQ(pairs.size(), 1u);
  EXPECT_EQ(pairs[0].sentiment_date, d(10));
  EXPECT_EQ(pairs[0].return_date, d(10));
}

TEST(Align, UnsortedInput) {
  const auto d = [](unsigned k) { return Date::from_ymd(2020, 4, k); };
  const std::vector<DailySentiment> s{day(d(10), 1), day(d(9), 2)};
  const std::vector<DailyReturn> r{{d(11), 0}};
  EXPECT_EQ(code_of([&] { align(r, s); }), ErrorCode::UnsortedInput);
  const std::vector<DailySentiment> ok{day(d(9), 1)};
  const std::vector<DailyReturn> dup{{d(11), 0}, {d(11), 1}};
  EXPECT_EQ(code_of([&] { align(dup, ok); }), ErrorCode::UnsortedInput);
}

TEST(Pearson, Examples) {
  const std::vector<double> x{1, 2, 3}, y{2, 4, 7}, neg{-1, -2, -3};
  EXPECT_NEAR(pearson(x, x), 1.0, 1e-15);
  EXPECT_NEAR(pearson(x, neg), -1.0, 1e-15);
  EXPECT_NEAR(pearson(x, y), 0.9933992677987828, 1e-12);
}

TEST(Pearson, PropertiesAgainstOracle) {
  Rng rng(4);
  for (int round = 0; round < 200; ++round) {
    const std::size_t n = 2 + rng.below(60);
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = rng.normal();
      y[i] = 0.5 * x[i] + rng.normal();
    }
    const double r = pearson(x, y);
    EXPECT_LE(std::abs(r), 1.0);
    EXPECT_NEAR(r, static_cast<double>(tstest::pearson_oracle(x, y)), 1e-9);
    EXPECT_EQ(pearson(y, x), r);
    const double a = rng.uniform(0.1, 10), b = rng.uniform(-5, 5);
    std::vector<double> ax(n);
    for (std::size_t i = 0; i < n; ++i) ax[i] = a * x[i] + b;
    EXPECT_NEAR(pearson(ax, y), r, 1e-12);
  }
}

TEST(Pearson, Errors) {
  const std::vector<double> x{1, 2, 3}, c{5, 5, 5}, two{1, 2};
  EXPECT_EQ(code_of([&] { pearson(x, c); }), ErrorCode::ZeroVariance);
  EXPECT_EQ(code_of([&] { pearson(x, two); }), ErrorCode::LengthMismatch);
  EXPECT_EQ(code_of([&] { pearson(std::span(x).first(1), std::span(x).first(1)); }), ErrorCode::LengthMismatch);
}

TEST(Correlate, ConstantSeriesGivesNan) {
  const auto d = Date::from_ymd(2020, 1, 1);
  std::vector<AlignedPair> pairs;
  for (int i = 0; i < 5; ++i) pairs.push_back({d.plus_days(i), d.plus_days(i + 1), {1.0 * i, 2.0, -1.0 * i}, 0.5 * i});
  const auto c = correlate(pairs);
  ASSERT_EQ(c.size(), 3u);
  EXPECT_EQ(c[0].model, Model::Lstm);
  EXPECT_NEAR(c[0].r, 1.0, 1e-12);
  EXPECT_TRUE(std::isnan(c[1].r));
  EXPECT_NEAR(c[2].r, -1.0, 1e-12);
  std::ostringstream out;
  write_correlation_csv(out, c);
  EXPECT_EQ(out.str().substr(0, out.str().find('\n')), "model,pearson_r,n_pairs");
  EXPECT_NE(out.str().find("rf,nan,5"), std::string::npos);
}
