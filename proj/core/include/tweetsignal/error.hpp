#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tweetsignal {

enum class ErrorCode {
  // Input data problems.
  MissingColumn,
  EmptyDataset,
  MalformedRow,
  DuplicateDate,
  NonPositiveClose,
  TooFewBars,
  UnsortedInput,
  MissingModelLabel,
  EmptyCorpus,
  EmptyData,
  IdOutOfRange,
  DimensionMismatch,
  LengthMismatch,
  EmptyInput,
  ZeroVariance,
  ModelVersionMismatch,
  ModelFormat,
  Io,
  // Caller-supplied configuration problems.
  InvalidArgument,
  NonPositiveAlpha,
  InvalidSplit,
  // Broken internal invariant.
  Internal,
};

/// Coarse class of an error, used by the CLI to choose an exit code.
enum class ErrorCategory { Usage, Data, Internal };

std::string_view to_string(ErrorCode code) noexcept;
ErrorCategory category_of(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }
  ErrorCategory category() const noexcept { return category_of(code_); }

 private:
  ErrorCode code_;
};

}  // namespace tweetsignal
