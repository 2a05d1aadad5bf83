#ifndef MROOT_ERROR_HPP
#define MROOT_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace mroot {

enum class ErrorCode {
  IndexOutOfRange,
  DuplicateIndex,
  RankTooSmall,
  InvalidDimension,
  DimensionMismatch,
  NonPositiveRadicand,
  SingularAij,
  DegenerateBasis,
  InadmissiblePerturbation,
  DimTooSmall,
  InadmissiblePoint,
  TooLarge,
  InvalidArgument,
  Io,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::DuplicateIndex: return "DuplicateIndex";
    case ErrorCode::RankTooSmall: return "RankTooSmall";
    case ErrorCode::InvalidDimension: return "InvalidDimension";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NonPositiveRadicand: return "NonPositiveRadicand";
    case ErrorCode::SingularAij: return "SingularAij";
    case ErrorCode::DegenerateBasis: return "DegenerateBasis";
    case ErrorCode::InadmissiblePerturbation: return "InadmissiblePerturbation";
    case ErrorCode::DimTooSmall: return "DimTooSmall";
    case ErrorCode::InadmissiblePoint: return "InadmissiblePoint";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

// All library failures are reported through this type; code() identifies the
// failure class, what() carries "<Code>: <detail>".
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(to_string(code)) + ": " + detail),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace mroot

#endif  // MROOT_ERROR_HPP
