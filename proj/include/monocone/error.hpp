#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace monocone {

enum class ErrorKind {
  kDimensionMismatch,
  kEmptySample,
  kNotCompilable,
  kNotMember,
  kEmptySet,
  kDimensionTooLarge,
  kNotOnGraph,
  kUnsupportedVariant,
  kTooFewSamples,
  kNotInDomain,
  kShiftTooSmall,
  kSegmentLeavesDomain,
  kWindowNotFound,
  kRoutesDisagree,
  kInvalidArgument,
  kParse,
};

std::string_view error_kind_name(ErrorKind kind);

/// Single exception type for the library; callers branch on `kind()`.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(error_kind_name(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace monocone
