#include "tweetsignal/signals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <ostream>

#include "tweetsignal/csv.hpp"
#include "tweetsignal/error.hpp"
#include "tweetsignal/number_io.hpp"

namespace tweetsignal {

std::string_view model_name(Model m) noexcept {
  switch (m) {
    case Model::Lstm: return "lstm";
    case Model::Rf: return "rf";
    case Model::Nb: return "nb";
  }
  return "?";
}

double bullishness(std::size_t positive, std::size_t negative) {
  return std::log((1.0 + static_cast<double>(positive)) / (1.0 + static_cast<double>(negative)));
}

std::vector<DailySentiment> bullishness_series(std::span<const ClassifiedTweet> tweets) {
  std::map<Date, PerModel<DayCounts>> days;
  for (const auto& t : tweets) {
    if (!t.lstm || !t.rf || !t.nb) {
      throw Error(ErrorCode::MissingModelLabel, "tweet '" + t.record.id + "' lacks a model label");
    }
    auto& counts = days[t.record.created_at];
    const PerModel<Label> labels{*t.lstm, *t.rf, *t.nb};
    for (std::size_t m = 0; m < 3; ++m) {
      auto& c = counts[m];
      (labels[m] == Label::Positive ? c.positive : c.negative)++;
    }
  }
  std::vector<DailySentiment> out;
  out.reserve(days.size());
  for (const auto& [date, counts] : days) {
    DailySentiment d{date, {}, counts};
    for (std::size_t m = 0; m < 3; ++m) d.bullishness[m] = bullishness(counts[m].positive, counts[m].negative);
    out.push_back(d);
  }
  return out;
}

std::vector<DailyReturn> return_series(std::span<const OhlcBar> bars) {
  if (bars.size() < 2) throw Error(ErrorCode::TooFewBars, "need at least two price bars");
  for (std::size_t i = 0; i < bars.size(); ++i) {
    if (!(bars[i].close > 0)) {
      throw Error(ErrorCode::NonPositiveClose, "close on " + bars[i].date.to_string() + " is not positive");
    }
    if (i > 0 && !(bars[i - 1].date < bars[i].date)) {
      throw Error(ErrorCode::UnsortedInput, "price bars not strictly increasing at " +
                                                bars[i].date.to_string());
    }
  }
  std::vector<DailyReturn> out;
  out.reserve(bars.size() - 1);
  for (std::size_t i = 1; i < bars.size(); ++i) {
    out.push_back({bars[i].date, (std::log(bars[i].close) - std::log(bars[i - 1].close)) * 100.0});
  }
  return out;
}

std::vector<AlignedPair> align(std::span<const DailyReturn> returns,
                               std::span<const DailySentiment> sentiment, AlignMode mode) {
  for (std::size_t i = 1; i < returns.size(); ++i) {
    if (!(returns[i - 1].date < returns[i].date)) {
      throw Error(ErrorCode::UnsortedInput, "returns not strictly increasing at " + returns[i].date.to_string());
    }
  }
  for (std::size_t i = 1; i < sentiment.size(); ++i) {
    if (!(sentiment[i - 1].date < sentiment[i].date)) {
      throw Error(ErrorCode::UnsortedInput, "sentiment not strictly increasing at " +
                                                sentiment[i].date.to_string());
    }
  }
  std::vector<AlignedPair> out;
  for (const auto& r : returns) {
    const auto it = std::lower_bound(sentiment.begin(), sentiment.end(), r.date,
                                     [](const DailySentiment& s, const Date& d) { return s.date < d; });
    const DailySentiment* chosen = nullptr;
    if (mode == AlignMode::Lagged) {
      if (it != sentiment.end() && it != sentiment.begin()) chosen = &*(it - 1);
    } else if (it != sentiment.end() && it->date == r.date) {
      chosen = &*it;
    }
    if (chosen) out.push_back({chosen->date, r.date, chosen->bullishness, r.value});
  }
  return out;
}

double pearson(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) {
    throw Error(ErrorCode::LengthMismatch, "pearson of " + std::to_string(xs.size()) + " vs " +
                                               std::to_string(ys.size()) + " values");
  }
  if (xs.size() < 2) throw Error(ErrorCode::LengthMismatch, "pearson needs at least two pairs");
  const auto n = static_cast<double>(xs.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx;
    const double dy = ys[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0 || syy == 0) throw Error(ErrorCode::ZeroVariance, "pearson of a constant series");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::vector<Correlation> correlate(std::span<const AlignedPair> pairs) {
  std::vector<double> returns;
  returns.reserve(pairs.size());
  for (const auto& p : pairs) returns.push_back(p.return_value);

  std::vector<Correlation> out;
  for (const auto m : kModels) {
    std::vector<double> b;
    b.reserve(pairs.size());
    for (const auto& p : pairs) b.push_back(at(p.bullishness, m));
    double r = std::numeric_limits<double>::quiet_NaN();
    try {
      r = pearson(b, returns);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::ZeroVariance && e.code() != ErrorCode::LengthMismatch) throw;
    }
    out.push_back({m, r, pairs.size()});
  }
  return out;
}

void write_aligned_csv(std::ostream& out, std::span<const AlignedPair> pairs) {
  csv::Writer w(out);
  w.row({"date", "lstm", "rf", "nb", "return"});
  for (const auto& p : pairs) {
    w.row({p.sentiment_date.to_string(), format_shortest(at(p.bullishness, Model::Lstm)),
           format_shortest(at(p.bullishness, Model::Rf)), format_shortest(at(p.bullishness, Model::Nb)),
           format_shortest(p.return_value)});
  }
}

void write_correlation_csv(std::ostream& out, std::span<const Correlation> rows) {
  csv::Writer w(out);
  w.row({"model", "pearson_r", "n_pairs"});
  for (const auto& c : rows) {
    w.row({std::string(model_name(c.model)), std::isnan(c.r) ? "nan" : format_shortest(c.r),
           std::to_string(c.n_pairs)});
  }
}

void write_bullishness_csv(std::ostream& out, std::span<const DailySentiment> days) {
  csv::Writer w(out);
  w.row({"date", "lstm", "rf", "nb"});
  for (const auto& d : days) {
    w.row({d.date.to_string(), format_shortest(at(d.bullishness, Model::Lstm)),
           format_shortest(at(d.bullishness, Model::Rf)), format_shortest(at(d.bullishness, Model::Nb))});
  }
}

}  // namespace tweetsignal
