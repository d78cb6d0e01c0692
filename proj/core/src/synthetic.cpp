#include "tweetsignal/synthetic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <ostream>

#include "tweetsignal/csv.hpp"
#include "tweetsignal/error.hpp"
#include "tweetsignal/hash.hpp"
#include "tweetsignal/number_io.hpp"
#include "tweetsignal/rng.hpp"

namespace tweetsignal::synthetic {
namespace {

using Pool = std::span<const char* const>;

constexpr std::array kStrongPositive = {"bullish", "moon",   "rally",  "soaring", "surge",   "profit",  "breakout",
                                        "upgrade", "rocket", "outperform", "beat", "jackpot", "skyrocket", "uptrend"};
constexpr std::array kStrongNegative = {"bearish", "crash",  "plunge", "dump",     "tanking",   "downgrade", "collapse",
                                        "lawsuit", "bankrupt", "underperform", "fraud", "selloff", "meltdown", "downtrend"};
constexpr std::array kWeakPositive = {"nice",   "happy",    "solid",  "optimistic", "confident", "excited", "growth",
                                      "winner", "awesome",  "lucky",  "cheerful",   "bright",    "steady",  "hopeful"};
constexpr std::array kWeakNegative = {"worried", "sad",    "tired", "ugly",    "scared",   "doubt",   "concern",
                                      "risky",   "awful",  "angry", "nervous", "gloomy",   "painful", "shaky"};
constexpr std::array kFiller = {"today",   "market",  "shares", "earnings", "week",   "chart",  "price",
                                "watching", "trade",  "volume", "news",     "analyst", "company", "quarter",
                                "session", "traders", "friday", "morning",  "update", "report", "guidance",
                                "dividend", "sector", "index",  "futures",  "options", "portfolio", "position"};
constexpr std::array kOtherTickers = {"$zorb", "$qwik", "$plex"};

const char* pick(Rng& rng, Pool pool) { return pool[rng.below(pool.size())]; }

struct TextMaker {
  const Options& o;
  Rng& rng;

  std::string make(bool positive) {
    std::vector<std::string> words;
    const std::size_t fillers = 2 + rng.below(4);
    for (std::size_t i = 0; i < fillers; ++i) words.emplace_back(pick(rng, kFiller));
    if (rng.uniform01() < o.weak_share) {
      const std::size_t cues = 3 + rng.below(3);
      for (std::size_t i = 0; i < cues; ++i) {
        const bool same = rng.uniform01() < o.weak_purity;
        words.emplace_back(pick(rng, (positive == same) ? Pool(kWeakPositive) : Pool(kWeakNegative)));
      }
    } else {
      words.emplace_back(pick(rng, positive ? Pool(kStrongPositive) : Pool(kStrongNegative)));
      if (rng.uniform01() < 0.3) words.emplace_back(pick(rng, positive ? Pool(kWeakPositive) : Pool(kWeakNegative)));
    }
    rng.shuffle(words.begin(), words.end());
    std::string text;
    for (const auto& w : words) {
      if (!text.empty()) text += ' ';
      text += w;
    }
    return text;
  }

  Label gold(bool positive) {
    if (rng.uniform01() < o.label_noise) positive = !positive;
    return label_from_bool(positive);
  }
};

std::string two_digits(std::uint64_t v) {
  return std::string(1, static_cast<char>('0' + v / 10)) + static_cast<char>('0' + v % 10);
}

void check(bool ok, const char* what) {
  if (!ok) throw Error(ErrorCode::InvalidArgument, std::string("synthetic option out of range: ") + what);
}

}  // namespace

Fixture generate(const Options& o) {
  check(o.training_size >= 2, "training_size");
  check(o.days >= 3, "days");
  check(o.tweets_per_day >= 1, "tweets_per_day");
  check(std::abs(o.correlation) <= 1, "correlation");
  check(o.weak_share >= 0 && o.weak_share <= 1, "weak_share");
  check(o.weak_purity >= 0 && o.weak_purity <= 1, "weak_purity");
  check(o.label_noise >= 0 && o.label_noise <= 0.5, "label_noise");
  check(o.off_ticker_share >= 0 && o.off_ticker_share < 1, "off_ticker_share");
  check(o.daily_volatility > 0, "daily_volatility");
  check(!o.ticker.empty(), "ticker");

  Fixture f;
  const std::string symbol = to_lower_ascii(o.ticker);
  f.aliases = {symbol};

  Rng text_rng(derive_seed(o.seed, 1));
  TextMaker maker{o, text_rng};

  const Date training_start = o.start.plus_days(-400);
  for (std::size_t i = 0; i < o.training_size; ++i) {
    const bool positive = i % 2 == 0;
    LabeledTweet t;
    t.record.id = "t" + std::to_string(i + 1);
    t.record.created_at = training_start.plus_days(static_cast<int>(text_rng.below(365)));
    t.record.full_text = maker.make(positive);
    t.label = maker.gold(positive);
    f.training.push_back(std::move(t));
  }
  text_rng.shuffle(f.training.begin(), f.training.end());

  // Daily tweet stream driven by a latent mood per day.
  Rng day_rng(derive_seed(o.seed, 2));
  std::vector<double> gold_bullishness(o.days);
  std::size_t serial = 0;
  for (std::size_t d = 0; d < o.days; ++d) {
    const Date day = o.start.plus_days(static_cast<int>(d));
    const double z = day_rng.normal();
    const double p = 1.0 / (1.0 + std::exp(-o.sentiment_scale * z));
    std::size_t pos = 0, neg = 0;
    for (std::size_t k = 0; k < o.tweets_per_day; ++k) {
      const bool off_ticker = text_rng.uniform01() < o.off_ticker_share;
      const bool positive = text_rng.uniform01() < p;
      std::string text = maker.make(positive);
      const std::string tag = off_ticker ? std::string(pick(text_rng, kOtherTickers))
                                         : (text_rng.below(2) ? "$" + symbol : symbol);
      text = text_rng.below(2) ? tag + " " + text : text + " " + tag;
      if (text_rng.uniform01() < 0.2) text += " https://example.com/p/" + std::to_string(text_rng.below(100000));
      LabeledTweet t;
      t.record.id = "s" + std::to_string(++serial);
      t.record.created_at = day;
      t.record.full_text = std::move(text);
      t.label = maker.gold(positive);
      if (!off_ticker) (t.label == Label::Positive ? pos : neg)++;
      f.stream.push_back(std::move(t));
    }
    gold_bullishness[d] = std::log((1.0 + static_cast<double>(pos)) / (1.0 + static_cast<double>(neg)));
  }

  // Trading days; each return after the first is driven by the previous
  // calendar day's sentiment.
  std::vector<std::size_t> trading;
  for (std::size_t d = 0; d < o.days; ++d) {
    if (!o.start.plus_days(static_cast<int>(d)).is_weekend()) trading.push_back(d);
  }
  check(trading.size() >= 4, "days (too few trading days)");
  const std::size_t n = trading.size() - 1;
  std::vector<double> x(n), e(n);
  Rng price_rng(derive_seed(o.seed, 3));
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = gold_bullishness[trading[i + 1] - 1];
    e[i] = price_rng.normal();
  }
  auto standardize = [](std::vector<double>& v) {
    double mean = 0;
    for (double a : v) mean += a;
    mean /= static_cast<double>(v.size());
    double ss = 0;
    for (double& a : v) {
      a -= mean;
      ss += a * a;
    }
    const double sd = std::sqrt(ss / static_cast<double>(v.size()));
    if (sd == 0) throw Error(ErrorCode::InvalidArgument, "synthetic sentiment has no variation");
    for (double& a : v) a /= sd;
  };
  standardize(x);
  standardize(e);
  double proj = 0;
  for (std::size_t i = 0; i < n; ++i) proj += x[i] * e[i];
  proj /= static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) e[i] -= proj * x[i];
  standardize(e);

  const double rho = o.correlation;
  const double rest = std::sqrt(1 - rho * rho);
  double close = 100.0;
  for (std::size_t i = 0; i < trading.size(); ++i) {
    const double prev = close;
    if (i > 0) close = prev * std::exp(o.daily_volatility * (rho * x[i - 1] + rest * e[i - 1]) / 100.0);
    OhlcBar b;
    b.date = o.start.plus_days(static_cast<int>(trading[i]));
    b.open = prev * std::exp(price_rng.uniform(-0.002, 0.002));
    b.high = std::max(b.open, close) * (1 + price_rng.uniform(0, 0.006));
    b.low = std::min(b.open, close) * (1 - price_rng.uniform(0, 0.006));
    b.close = close;
    b.adj_close = close;
    b.volume = 1000000 + price_rng.below(4000000);
    f.bars.push_back(b);
  }
  return f;
}

void write_labeled_csv(std::ostream& out, std::span<const LabeledTweet> tweets) {
  csv::Writer w(out);
  w.row({"id", "created_at", "full_text", "label"});
  for (const auto& t : tweets) {
    // Spread timestamps over the day so ingestion exercises ISO parsing.
    const auto h = fnv1a64(t.record.id);
    const std::string stamp = t.record.created_at.to_string() + "T" + two_digits(h % 24) + ":" +
                              two_digits((h / 24) % 60) + ":" + two_digits((h / 1440) % 60) + "Z";
    w.row({t.record.id, stamp, t.record.full_text, t.label == Label::Positive ? "4" : "0"});
  }
}

void write_ohlc_csv(std::ostream& out, std::span<const OhlcBar> bars) {
  csv::Writer w(out);
  w.row({"Date", "Open", "High", "Low", "Close", "Adj Close", "Volume"});
  for (const auto& b : bars) {
    w.row({b.date.to_string(), format_exact(b.open), format_exact(b.high), format_exact(b.low),
           format_exact(b.close), format_exact(b.adj_close), std::to_string(b.volume)});
  }
}

void write_fixture(const Fixture& fixture, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto open = [&](const char* name) {
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + (dir / name).string());
    return out;
  };
  {
    auto out = open("training.csv");
    write_labeled_csv(out, fixture.training);
  }
  {
    auto out = open("tweets.csv");
    write_labeled_csv(out, fixture.stream);
  }
  {
    auto out = open("prices.csv");
    write_ohlc_csv(out, fixture.bars);
  }
}

}  // namespace tweetsignal::synthetic
