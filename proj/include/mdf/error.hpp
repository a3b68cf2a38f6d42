#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mdf {

/// Error categories shared by the C++ core and the C API status codes.
enum class ErrorCode {
  InvalidArgument = 1,
  Parse = 2,
  Schema = 3,
  Invariant = 4,
  Domain = 5,
  Assumption = 6,
  Range = 7,
  Io = 8,
  NotSolved = 9,
  Internal = 10,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Expression syntax error; `offset` is the byte offset into the source text.
class ParseError : public Error {
 public:
  ParseError(std::size_t offset, const std::string& msg)
      : Error(ErrorCode::Parse, msg + " at offset " + std::to_string(offset)), offset_(offset), detail_(msg) {}
  std::size_t offset() const noexcept { return offset_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  std::size_t offset_;
  std::string detail_;
};

}  // namespace mdf
