#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace locfuse {

enum class ErrorCode {
  DimensionMismatch,
  NonFiniteValue,
  DtypeViolation,
  NotARotation,
  InvalidDims,
  ZeroVector,
  EmptyDatabase,
  DanglingReference,
  MissingGlobal,
  TooManyCells,
  DegenerateConfiguration,
  TooFewMatches,
  KTooLarge,
  UnknownKeypoint,
  InfeasibleGeometry,
  BadMagic,
  UnsupportedVersion,
  TruncatedFile,
  ReducerMismatch,
  ParseError,
  MissingIntrinsics,
  InvalidArgument,
  IoError,
};

std::string_view to_string(ErrorCode code);

// Every recoverable failure in the library is reported through this type.
// `index` carries the offending row, line number or byte offset when one
// exists.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what,
        std::optional<std::size_t> index = std::nullopt)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code),
        index_(index) {}

  ErrorCode code() const noexcept { return code_; }
  std::optional<std::size_t> index() const noexcept { return index_; }

 private:
  ErrorCode code_;
  std::optional<std::size_t> index_;
};

}  // namespace locfuse
