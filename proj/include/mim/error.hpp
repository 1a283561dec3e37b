#pragma once

#include <stdexcept>
#include <string>

namespace mim {

enum class ErrorCode {
  InvalidEncoding,
  DepthExceeded,
  ParseError,
  DuplicateSource,
  SelfMapping,
  StaleSwap,
  EmptyCorpus,
  EmptyGroup,
  RankDeficient,
  InsufficientData,
  InvalidArgument,
  IoError,
};

const char* error_code_name(ErrorCode code);

/// Library-wide exception type. Every documented failure mode carries a
/// stable ErrorCode so callers (and tests) can dispatch without string
/// matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace mim
