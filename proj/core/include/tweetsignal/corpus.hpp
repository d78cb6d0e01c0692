#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tweetsignal/date.hpp"

namespace tweetsignal {

enum class Label : std::uint8_t { Negative = 0, Positive = 1 };

constexpr int to_int(Label l) noexcept { return static_cast<int>(l); }
constexpr Label label_from_bool(bool positive) noexcept {
  return positive ? Label::Positive : Label::Negative;
}

enum class SourceModel { Nb, Rf, Lstm, Gold };

struct TweetRecord {
  std::string id;
  Date created_at;
  std::string full_text;
};

struct LabeledTweet {
  TweetRecord record;
  Label label = Label::Negative;
  SourceModel source_model = SourceModel::Gold;
};

/// A tweet carrying the predictions of all three classifiers. A label may be
/// absent when the column cell was empty.
struct ClassifiedTweet {
  TweetRecord record;
  std::optional<Label> nb;
  std::optional<Label> rf;
  std::optional<Label> lstm;
};

struct OhlcBar {
  Date date;
  double open = 0;
  double high = 0;
  double low = 0;
  double close = 0;
  double adj_close = 0;
  std::uint64_t volume = 0;
};

/// Case-insensitive substring matcher for one ticker.
class TickerFilter {
 public:
  /// Throws Error(InvalidArgument) when `aliases` is empty or has an entry that
  /// is empty or not lowercase.
  TickerFilter(std::string ticker, std::set<std::string> aliases);

  /// Single alias: the lowercased symbol (which also matches `$aapl`, `#aapl`).
  static TickerFilter for_symbol(std::string_view ticker);

  const std::string& ticker() const noexcept { return ticker_; }
  const std::set<std::string>& aliases() const noexcept { return aliases_; }

  bool matches(std::string_view text) const;

 private:
  std::string ticker_;
  std::set<std::string> aliases_;
};

template <class T>
struct LoadResult {
  std::vector<T> records;
  std::size_t skipped = 0;
};

/// Raw label mapping used at ingestion: 0 -> Negative, 1 or 4 -> Positive.
std::optional<Label> parse_raw_label(std::string_view cell);

/// Reads `id,created_at,full_text`. Rows with a bad date, blank text or a
/// short field count are skipped and counted.
/// Throws Error(MissingColumn) or Error(EmptyDataset).
LoadResult<TweetRecord> load_tweets(const std::filesystem::path& path);

/// As load_tweets, plus a `label` column (0/4 or 0/1); rows with any other
/// label value are skipped.
LoadResult<LabeledTweet> load_labeled_tweets(const std::filesystem::path& path);

/// Reads the labeller output: `id,created_at,full_text,Label_nb,Label_rf,Label_lstm`.
LoadResult<ClassifiedTweet> load_classified_tweets(const std::filesystem::path& path);

/// Keeps records whose lowercased text contains any alias; order preserved.
std::vector<TweetRecord> filter_by_ticker(std::span<const TweetRecord> records,
                                          const TickerFilter& filter);

/// Reads `Date,Open,High,Low,Close,Adj Close,Volume` and returns bars sorted by
/// date. Any malformed row is fatal: MalformedRow, NonPositiveClose,
/// DuplicateDate, MissingColumn, EmptyDataset.
std::vector<OhlcBar> load_ohlc(const std::filesystem::path& path);

std::string to_lower_ascii(std::string_view text);

}  // namespace tweetsignal
