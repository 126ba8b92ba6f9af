#ifndef XAFCM_ERROR_HPP
#define XAFCM_ERROR_HPP

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace xafcm {

enum class ErrorCode {
  EmptyInput,
  UnknownSymbol,
  InvalidAlphabet,
  InvalidParams,
  NoSolution,
  EmptyReference,
  EmptyTarget,
  LengthMismatch,
  AlphabetMismatch,
  FormatError,
  VersionMismatch,
  TooFewPeaks,
  InvalidPeaks,
  EmptySegment,
  DuplicateLabel,
  UnknownLabel,
  IoError,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::UnknownSymbol: return "UnknownSymbol";
    case ErrorCode::InvalidAlphabet: return "InvalidAlphabet";
    case ErrorCode::InvalidParams: return "InvalidParams";
    case ErrorCode::NoSolution: return "NoSolution";
    case ErrorCode::EmptyReference: return "EmptyReference";
    case ErrorCode::EmptyTarget: return "EmptyTarget";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::AlphabetMismatch: return "AlphabetMismatch";
    case ErrorCode::FormatError: return "FormatError";
    case ErrorCode::VersionMismatch: return "VersionMismatch";
    case ErrorCode::TooFewPeaks: return "TooFewPeaks";
    case ErrorCode::InvalidPeaks: return "InvalidPeaks";
    case ErrorCode::EmptySegment: return "EmptySegment";
    case ErrorCode::DuplicateLabel: return "DuplicateLabel";
    case ErrorCode::UnknownLabel: return "UnknownLabel";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

/// Every failure raised by the library. `position()` carries the byte offset
/// (UnknownSymbol) or 1-based line number (FormatError) when one applies.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what,
        std::optional<std::size_t> position = std::nullopt)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code),
        position_(position) {}

  ErrorCode code() const noexcept { return code_; }
  std::optional<std::size_t> position() const noexcept { return position_; }

 private:
  ErrorCode code_;
  std::optional<std::size_t> position_;
};

}  // namespace xafcm

#endif  // XAFCM_ERROR_HPP
