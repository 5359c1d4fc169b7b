#pragma once

#include <stdexcept>
#include <string>

namespace generank {

/// Failure categories surfaced by the library. The numeric values are mirrored
/// by the C API status codes in generank.h.
enum class ErrorCode {
  InvalidArgument = 1,
  DimensionMismatch = 2,
  Parse = 3,
  Io = 4,
  Validation = 5,
  Breakdown = 6,
  CapExceeded = 7,
  Singular = 8,
  Internal = 9,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace generank
