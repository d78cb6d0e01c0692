#include "tweetsignal/error.hpp"

namespace tweetsignal {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::MissingColumn: return "MissingColumn";
    case ErrorCode::EmptyDataset: return "EmptyDataset";
    case ErrorCode::MalformedRow: return "MalformedRow";
    case ErrorCode::DuplicateDate: return "DuplicateDate";
    case ErrorCode::NonPositiveClose: return "NonPositiveClose";
    case ErrorCode::TooFewBars: return "TooFewBars";
    case ErrorCode::UnsortedInput: return "UnsortedInput";
    case ErrorCode::MissingModelLabel: return "MissingModelLabel";
    case ErrorCode::EmptyCorpus: return "EmptyCorpus";
    case ErrorCode::EmptyData: return "EmptyData";
    case ErrorCode::IdOutOfRange: return "IdOutOfRange";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::ZeroVariance: return "ZeroVariance";
    case ErrorCode::ModelVersionMismatch: return "ModelVersionMismatch";
    case ErrorCode::ModelFormat: return "ModelFormat";
    case ErrorCode::Io: return "Io";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NonPositiveAlpha: return "NonPositiveAlpha";
    case ErrorCode::InvalidSplit: return "InvalidSplit";
    case ErrorCode::Internal: return "Internal";
  }
  return "Unknown";
}

ErrorCategory category_of(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument:
    case ErrorCode::NonPositiveAlpha:
    case ErrorCode::InvalidSplit:
      return ErrorCategory::Usage;
    case ErrorCode::Internal:
      return ErrorCategory::Internal;
    default:
      return ErrorCategory::Data;
  }
}

}  // namespace tweetsignal
