#pragma once

#include <stdexcept>
#include <string>

namespace bsom {

enum class ErrorCode {
  InvalidArgument = 1,
  Io,
  Parse,
  Numeric,
  Degenerate,
  TooLarge,
  VersionMismatch,
};

/// Single exception type thrown by the core; the C layer maps `code()` onto
/// its status enum.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace bsom
