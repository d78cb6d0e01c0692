#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "tweetsignal/corpus.hpp"
#include "tweetsignal/date.hpp"

namespace tweetsignal::synthetic {

struct Options {
  std::uint64_t seed = 42;
  std::size_t training_size = 2000;
  std::size_t days = 90;  ///< calendar days of ticker tweets
  Date start = Date::from_ymd(2024, 1, 1);
  std::size_t tweets_per_day = 40;
  std::string ticker = "ACME";
  /// Pearson correlation planted between next-day returns and the gold
  /// daily bullishness of the preceding tweet day; exact in-sample.
  double correlation = 0.8;
  double sentiment_scale = 1.5;  ///< slope of P(positive) in the daily latent
  /// Share of tweets carrying only weak, additive cue words instead of a
  /// single decisive polarity word.
  double weak_share = 0.35;
  double weak_purity = 0.8;   ///< chance a weak cue matches the tweet's class
  double label_noise = 0.02;  ///< chance a gold label is flipped
  double off_ticker_share = 0.1;
  double daily_volatility = 1.5;  ///< return standard deviation in percent
};

struct Fixture {
  std::vector<LabeledTweet> training;  ///< generic labeled corpus
  std::vector<LabeledTweet> stream;    ///< dated tweets, some about the ticker
  std::vector<OhlcBar> bars;
  std::vector<std::string> aliases;
};

/// Throws Error(InvalidArgument) for out-of-range options.
Fixture generate(const Options& options);

/// `id,created_at,full_text,label` with labels written as 0/4.
void write_labeled_csv(std::ostream& out, std::span<const LabeledTweet> tweets);
/// `Date,Open,High,Low,Close,Adj Close,Volume`.
void write_ohlc_csv(std::ostream& out, std::span<const OhlcBar> bars);

/// Writes training.csv, tweets.csv and prices.csv into `dir`.
void write_fixture(const Fixture& fixture, const std::filesystem::path& dir);

}  // namespace tweetsignal::synthetic
