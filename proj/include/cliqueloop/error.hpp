#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cliqueloop {

enum class ErrorCode {
  SizeMismatch,
  Underdetermined,
  Degenerate,
  DimMismatch,
  EmptySet,
  NonFiniteValue,
  LengthMismatch,
  EmptyVector,
  NonPositiveEpsilon,
  GraphTooLarge,
  TooFewCorrespondences,
  DomainError,
  InvalidSpec,
  InvalidGrid,
  InvalidParams,
  ParseError,
  IoError,
};

std::string_view to_string(ErrorCode code);

/// Exception carrying a machine-checkable code; every library failure goes
/// through this type.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace cliqueloop
