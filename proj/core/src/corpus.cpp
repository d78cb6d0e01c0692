#include "tweetsignal/corpus.hpp"

#include <algorithm>
#include <cmath>

#include "tweetsignal/csv.hpp"
#include "tweetsignal/error.hpp"
#include "tweetsignal/number_io.hpp"

namespace tweetsignal {

namespace {

bool is_blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v';
  });
}

struct TweetColumns {
  std::size_t id, created_at, full_text;
};

TweetColumns tweet_columns(const csv::Table& table, const std::string& source) {
  return {table.require_column("id", source), table.require_column("created_at", source),
          table.require_column("full_text", source)};
}

// Shared row validation for every tweet schema.
std::optional<TweetRecord> read_tweet(const std::vector<std::string>& row, const TweetColumns& c,
                                      std::size_t width) {
  if (row.size() < width) return std::nullopt;
  const auto date = Date::parse(row[c.created_at]);
  if (!date || is_blank(row[c.full_text])) return std::nullopt;
  return TweetRecord{row[c.id], *date, row[c.full_text]};
}

template <class T>
void require_nonempty(const LoadResult<T>& result, const std::filesystem::path& path) {
  if (result.records.empty()) {
    throw Error(ErrorCode::EmptyDataset,
                path.string() + ": no valid rows (" + std::to_string(result.skipped) + " skipped)");
  }
}

}  // namespace

std::string to_lower_ascii(std::string_view text) {
  std::string out(text);
  for (auto& ch : out) {
    if (ch >= 'A' && ch <= 'Z') ch = static_cast<char>(ch - 'A' + 'a');
  }
  return out;
}

TickerFilter::TickerFilter(std::string ticker, std::set<std::string> aliases)
    : ticker_(std::move(ticker)), aliases_(std::move(aliases)) {
  if (aliases_.empty()) throw Error(ErrorCode::InvalidArgument, "ticker filter needs an alias");
  for (const auto& a : aliases_) {
    if (a.empty() || a != to_lower_ascii(a)) {
      throw Error(ErrorCode::InvalidArgument, "alias must be non-empty lowercase: '" + a + "'");
    }
  }
}

TickerFilter TickerFilter::for_symbol(std::string_view ticker) {
  return TickerFilter(std::string(ticker), {to_lower_ascii(ticker)});
}

bool TickerFilter::matches(std::string_view text) const {
  const std::string lowered = to_lower_ascii(text);
  return std::any_of(aliases_.begin(), aliases_.end(), [&](const std::string& alias) {
    return lowered.find(alias) != std::string::npos;
  });
}

std::optional<Label> parse_raw_label(std::string_view cell) {
  const auto v = parse_int(cell);
  if (!v) return std::nullopt;
  switch (*v) {
    case 0: return Label::Negative;
    case 1:
    case 4: return Label::Positive;
    default: return std::nullopt;
  }
}

LoadResult<TweetRecord> load_tweets(const std::filesystem::path& path) {
  const auto table = csv::read_file(path);
  const auto cols = tweet_columns(table, path.string());
  const std::size_t width = std::max({cols.id, cols.created_at, cols.full_text}) + 1;

  LoadResult<TweetRecord> result;
  for (const auto& row : table.rows) {
    if (auto rec = read_tweet(row, cols, width)) {
      result.records.push_back(std::move(*rec));
    } else {
      ++result.skipped;
    }
  }
  require_nonempty(result, path);
  return result;
}

LoadResult<LabeledTweet> load_labeled_tweets(const std::filesystem::path& path) {
  const auto table = csv::read_file(path);
  const auto cols = tweet_columns(table, path.string());
  const std::size_t label_col = table.require_column("label", path.string());
  const std::size_t width = std::max({cols.id, cols.created_at, cols.full_text, label_col}) + 1;

  LoadResult<LabeledTweet> result;
  for (const auto& row : table.rows) {
    auto rec = read_tweet(row, cols, width);
    const auto label = rec ? parse_raw_label(row[label_col]) : std::nullopt;
    if (!rec || !label) {
      ++result.skipped;
      continue;
    }
    result.records.push_back({std::move(*rec), *label, SourceModel::Gold});
  }
  require_nonempty(result, path);
  return result;
}

LoadResult<ClassifiedTweet> load_classified_tweets(const std::filesystem::path& path) {
  const auto table = csv::read_file(path);
  const auto cols = tweet_columns(table, path.string());
  const std::size_t nb = table.require_column("Label_nb", path.string());
  const std::size_t rf = table.require_column("Label_rf", path.string());
  const std::size_t lstm = table.require_column("Label_lstm", path.string());
  const std::size_t width = std::max({cols.id, cols.created_at, cols.full_text, nb, rf, lstm}) + 1;

  LoadResult<ClassifiedTweet> result;
  for (const auto& row : table.rows) {
    auto rec = read_tweet(row, cols, width);
    if (!rec) {
      ++result.skipped;
      continue;
    }
    // Empty cell: label missing. Anything else must be a valid label.
    bool bad = false;
    auto cell = [&](std::size_t idx) -> std::optional<Label> {
      if (is_blank(row[idx])) return std::nullopt;
      auto l = parse_raw_label(row[idx]);
      if (!l) bad = true;
      return l;
    };
    ClassifiedTweet t{std::move(*rec), cell(nb), cell(rf), cell(lstm)};
    if (bad) {
      ++result.skipped;
      continue;
    }
    result.records.push_back(std::move(t));
  }
  require_nonempty(result, path);
  return result;
}

std::vector<TweetRecord> filter_by_ticker(std::span<const TweetRecord> records,
                                          const TickerFilter& filter) {
  std::vector<TweetRecord> out;
  for (const auto& r : records) {
    if (filter.matches(r.full_text)) out.push_back(r);
  }
  return out;
}

std::vector<OhlcBar> load_ohlc(const std::filesystem::path& path) {
  const auto table = csv::read_file(path);
  const std::string src = path.string();
  const std::size_t c_date = table.require_column("Date", src);
  const std::size_t c_open = table.require_column("Open", src);
  const std::size_t c_high = table.require_column("High", src);
  const std::size_t c_low = table.require_column("Low", src);
  const std::size_t c_close = table.require_column("Close", src);
  const std::size_t c_adj = table.require_column("Adj Close", src);
  const std::size_t c_vol = table.require_column("Volume", src);
  const std::size_t width = std::max({c_date, c_open, c_high, c_low, c_close, c_adj, c_vol}) + 1;

  std::vector<OhlcBar> bars;
  bars.reserve(table.rows.size());
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    const std::string where = src + " row " + std::to_string(i + 2);
    if (row.size() < width) throw Error(ErrorCode::MalformedRow, where + ": too few fields");

    const auto date = Date::parse(row[c_date]);
    if (!date) throw Error(ErrorCode::MalformedRow, where + ": bad date '" + row[c_date] + "'");
    auto number = [&](std::size_t col) {
      const auto v = parse_double(row[col]);
      if (!v || !std::isfinite(*v)) {
        throw Error(ErrorCode::MalformedRow, where + ": bad number '" + row[col] + "'");
      }
      return *v;
    };
    OhlcBar bar;
    bar.date = *date;
    bar.open = number(c_open);
    bar.high = number(c_high);
    bar.low = number(c_low);
    bar.close = number(c_close);
    bar.adj_close = number(c_adj);
    const double volume = number(c_vol);
    if (volume < 0 || volume != std::floor(volume)) {
      throw Error(ErrorCode::MalformedRow, where + ": volume must be a non-negative integer");
    }
    bar.volume = static_cast<std::uint64_t>(volume);

    if (bar.close <= 0) throw Error(ErrorCode::NonPositiveClose, where + ": close must be > 0");
    if (bar.low > std::min(bar.open, bar.close) || std::max(bar.open, bar.close) > bar.high) {
      throw Error(ErrorCode::MalformedRow, where + ": inconsistent OHLC range");
    }
    bars.push_back(bar);
  }
  if (bars.empty()) throw Error(ErrorCode::EmptyDataset, src + ": no price rows");

  std::stable_sort(bars.begin(), bars.end(),
                   [](const OhlcBar& a, const OhlcBar& b) { return a.date < b.date; });
  for (std::size_t i = 1; i < bars.size(); ++i) {
    if (bars[i].date == bars[i - 1].date) {
      throw Error(ErrorCode::DuplicateDate, src + ": duplicate date " + bars[i].date.to_string());
    }
  }
  return bars;
}

}  // namespace tweetsignal
