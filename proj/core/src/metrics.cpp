#include "tweetsignal/metrics.hpp"

#include <algorithm>
#include <sstream>

#include "tweetsignal/error.hpp"
#include "tweetsignal/number_io.hpp"

namespace tweetsignal {

double ConfusionMatrix::accuracy() const {
  if (total() == 0) throw Error(ErrorCode::EmptyInput, "accuracy of an empty confusion matrix");
  return 100.0 * static_cast<double>(tp + tn) / static_cast<double>(total());
}

ConfusionMatrix confusion(std::span<const Label> y_true, std::span<const Label> y_pred) {
  if (y_true.size() != y_pred.size()) {
    throw Error(ErrorCode::LengthMismatch, std::to_string(y_true.size()) + " true labels vs " +
                                               std::to_string(y_pred.size()) + " predictions");
  }
  if (y_true.empty()) throw Error(ErrorCode::EmptyInput, "no labels to compare");
  ConfusionMatrix m;
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    const bool t = y_true[i] == Label::Positive;
    const bool p = y_pred[i] == Label::Positive;
    if (t && p) ++m.tp;
    else if (!t && !p) ++m.tn;
    else if (p) ++m.fp;
    else ++m.fn;
  }
  return m;
}

double accuracy(std::span<const Label> y_true, std::span<const Label> y_pred) {
  return confusion(y_true, y_pred).accuracy();
}

std::string format_confusion(const ConfusionMatrix& m) {
  const auto cell = [](std::size_t v) {
    std::string s = std::to_string(v);
    return std::string(s.size() < 10 ? 10 - s.size() : 0, ' ') + s;
  };
  std::ostringstream out;
  out << "                pred=0    pred=1\n";
  out << "  actual=0  " << cell(m.tn) << cell(m.fp) << "\n";
  out << "  actual=1  " << cell(m.fn) << cell(m.tp) << "\n";
  out << "  accuracy: " << format_fixed(m.accuracy(), 2) << "%\n";
  return out.str();
}

}  // namespace tweetsignal
