#include "cliqueloop/error.hpp"

namespace cliqueloop {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::SizeMismatch: return "SizeMismatch";
    case ErrorCode::Underdetermined: return "Underdetermined";
    case ErrorCode::Degenerate: return "Degenerate";
    case ErrorCode::DimMismatch: return "DimMismatch";
    case ErrorCode::EmptySet: return "EmptySet";
    case ErrorCode::NonFiniteValue: return "NonFiniteValue";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::EmptyVector: return "EmptyVector";
    case ErrorCode::NonPositiveEpsilon: return "NonPositiveEpsilon";
    case ErrorCode::GraphTooLarge: return "GraphTooLarge";
    case ErrorCode::TooFewCorrespondences: return "TooFewCorrespondences";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::InvalidGrid: return "InvalidGrid";
    case ErrorCode::InvalidParams: return "InvalidParams";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace cliqueloop
