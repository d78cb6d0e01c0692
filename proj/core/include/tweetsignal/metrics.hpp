#pragma once

#include <cstddef>
#include <span>
#include <string>

#include "tweetsignal/corpus.hpp"

namespace tweetsignal {

struct ConfusionMatrix {
  std::size_t tp = 0;
  std::size_t tn = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;

  std::size_t total() const noexcept { return tp + tn + fp + fn; }
  /// Percentage of correct predictions, 0-100.
  double accuracy() const;

  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

/// Throws Error(LengthMismatch) or Error(EmptyInput).
ConfusionMatrix confusion(std::span<const Label> y_true, std::span<const Label> y_pred);

/// 100 * (tp + tn) / total.
double accuracy(std::span<const Label> y_true, std::span<const Label> y_pred);

/// Labeled 2x2 table followed by `accuracy: NN.NN%`.
std::string format_confusion(const ConfusionMatrix& m);

}  // namespace tweetsignal
