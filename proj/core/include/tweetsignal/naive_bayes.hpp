#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "tweetsignal/corpus.hpp"
#include "tweetsignal/features.hpp"

namespace tweetsignal {

/// Bernoulli Naive Bayes over binary features, two classes. All probabilities
/// are kept as natural logs.
class NbModel {
 public:
  inline static constexpr int kFormatVersion = 1;
  inline static constexpr double kDefaultAlpha = 1.0;

  struct ClassTable {
    std::vector<double> log_present;  ///< log P(x_i = 1 | c)
    std::vector<double> log_absent;   ///< log P(x_i = 0 | c)

    friend bool operator==(const ClassTable&, const ClassTable&) = default;
  };

  NbModel(std::array<double, 2> class_log_prior, std::array<ClassTable, 2> tables, double alpha);

  const std::array<double, 2>& class_log_prior() const noexcept { return class_log_prior_; }
  const ClassTable& table(Label c) const noexcept { return tables_[static_cast<std::size_t>(c)]; }
  double alpha() const noexcept { return alpha_; }
  std::size_t n_features() const noexcept { return tables_[0].log_present.size(); }

  void write(std::ostream& out) const;
  static NbModel read(std::istream& in);
  void save(const std::filesystem::path& path) const;
  static NbModel load(const std::filesystem::path& path);

  friend bool operator==(const NbModel&, const NbModel&) = default;

 private:
  std::array<double, 2> class_log_prior_;
  std::array<ClassTable, 2> tables_;
  double alpha_;
};

struct NbOptions {
  double alpha = NbModel::kDefaultAlpha;
  /// Use P(c) = 1/2 instead of class frequencies.
  bool uniform_prior = false;
};

/// P(x_i=1|c) = (count(x_i=1, y=c) + alpha) / (count(y=c) + 2 alpha),
/// P(c) = count(y=c) / |y|. A class missing from `y` gets prior 0.
/// Throws Error(DimensionMismatch), Error(EmptyData), Error(NonPositiveAlpha).
NbModel fit_nb(std::span<const BinaryVector> x, std::span<const Label> y, NbOptions options = {});

struct NbPrediction {
  Label label = Label::Negative;
  std::array<double, 2> log_posterior{};
};

/// Log posteriors within kNbTieTolerance (relative) of each other count as a
/// tie, and ties go to Negative.
inline constexpr double kNbTieTolerance = 1e-12;

NbPrediction predict_nb(const NbModel& model, const BinaryVector& x);

}  // namespace tweetsignal
