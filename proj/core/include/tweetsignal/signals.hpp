#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "tweetsignal/corpus.hpp"
#include "tweetsignal/date.hpp"

namespace tweetsignal {

/// Classifier order used by every per-model array and CSV column here.
enum class Model : std::size_t { Lstm = 0, Rf = 1, Nb = 2 };
inline constexpr std::array<Model, 3> kModels = {Model::Lstm, Model::Rf, Model::Nb};
std::string_view model_name(Model m) noexcept;

template <class T>
using PerModel = std::array<T, 3>;

template <class T>
constexpr const T& at(const PerModel<T>& values, Model m) {
  return values[static_cast<std::size_t>(m)];
}

struct DayCounts {
  std::size_t positive = 0;
  std::size_t negative = 0;
};

/// ln((1 + positive) / (1 + negative)).
double bullishness(std::size_t positive, std::size_t negative);

struct DailySentiment {
  Date date;
  PerModel<double> bullishness{};
  PerModel<DayCounts> counts{};
};

/// Groups tweets by calendar day and computes each model's bullishness.
/// Output is sorted by date; days without tweets are absent.
/// Throws Error(MissingModelLabel) if any tweet lacks a label.
std::vector<DailySentiment> bullishness_series(std::span<const ClassifiedTweet> tweets);

struct DailyReturn {
  Date date;     ///< the later of the two days
  double value;  ///< 100 * (ln close_t - ln close_{t-1})
};

/// n bars -> n-1 returns. Throws Error(TooFewBars), Error(NonPositiveClose) or
/// Error(UnsortedInput) when dates are not strictly increasing.
std::vector<DailyReturn> return_series(std::span<const OhlcBar> bars);

enum class AlignMode {
  /// Each return is paired with the latest sentiment day strictly before it.
  Lagged,
  /// Each return is paired with sentiment from the same calendar day.
  SameDay,
};

struct AlignedPair {
  Date sentiment_date;
  Date return_date;
  PerModel<double> bullishness{};
  double return_value = 0;
};

/// Lagged mode: for each return, j is the first sentiment day on or after the
/// return's date; the pair uses sentiment[j-1]. Returns with no such j, or with
/// j == 0, produce no pair. Throws Error(UnsortedInput).
std::vector<AlignedPair> align(std::span<const DailyReturn> returns,
                               std::span<const DailySentiment> sentiment,
                               AlignMode mode = AlignMode::Lagged);

/// Pearson correlation coefficient. Throws Error(LengthMismatch) for unequal
/// or fewer than two values, Error(ZeroVariance) for a constant series.
double pearson(std::span<const double> xs, std::span<const double> ys);

struct Correlation {
  Model model;
  double r;  ///< NaN when undefined (constant series)
  std::size_t n_pairs;
};

/// Bullishness-vs-return correlation for each model.
std::vector<Correlation> correlate(std::span<const AlignedPair> pairs);

/// `date,lstm,rf,nb,return`, one row per pair; `date` is the sentiment day.
void write_aligned_csv(std::ostream& out, std::span<const AlignedPair> pairs);
/// `model,pearson_r,n_pairs`.
void write_correlation_csv(std::ostream& out, std::span<const Correlation> rows);
/// `date,lstm,rf,nb`.
void write_bullishness_csv(std::ostream& out, std::span<const DailySentiment> days);

}  // namespace tweetsignal
