#pragma once

#include <stdexcept>
#include <string>

namespace rrd {

// Mirrors rrd_status in the C API; the numeric values are part of the ABI.
enum class ErrorCode : int {
  kParse = 1,
  kSizeMismatch = 2,
  kInapplicable = 3,
  kBadAddress = 4,
  kNotReduced = 5,
  kBoundExceeded = 6,
  kInvalidArgument = 7,
  kIo = 8,
  kBudgetExhausted = 9,
  kDegenerate = 10,
  kInternal = 11,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Raised by Tree::parse; position is the 0-based index of the first
// offending character (or the string length when the totals are wrong).
class ParseError : public Error {
 public:
  ParseError(std::size_t position, const std::string& what)
      : Error(ErrorCode::kParse, what), position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

}  // namespace rrd
