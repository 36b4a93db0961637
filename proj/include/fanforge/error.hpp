// Copyright Contributors to the fanforge project.
// SPDX-License-Identifier: Apache-2.0

#ifndef FANFORGE_ERROR_HPP
#define FANFORGE_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace fanforge {

enum class ErrorCode {
  MissingScanMask,
  ShapeMismatch,
  EmptyMask,
  ZeroBaseline,
  NOutOfRange,
  InvalidArgument,
  ParseError,
  DuplicateId,
  MissingFile,
  SchemaError,
  IoError,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MissingScanMask: return "MissingScanMask";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::EmptyMask: return "EmptyMask";
    case ErrorCode::ZeroBaseline: return "ZeroBaseline";
    case ErrorCode::NOutOfRange: return "NOutOfRange";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::DuplicateId: return "DuplicateId";
    case ErrorCode::MissingFile: return "MissingFile";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

/// Every failure raised by the library. `code()` identifies the failure class;
/// `line()` is the 1-based input line for manifest errors (0 otherwise) and
/// `subject()` carries the offending sample id or schema path when there is one.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, std::string subject = {},
        std::size_t line = 0)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code),
        subject_(std::move(subject)),
        line_(line) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& subject() const noexcept { return subject_; }
  std::size_t line() const noexcept { return line_; }

 private:
  ErrorCode code_;
  std::string subject_;
  std::size_t line_;
};

}  // namespace fanforge

#endif  // FANFORGE_ERROR_HPP
