#ifndef CARDXOR_ERROR_HPP
#define CARDXOR_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cardxor {

enum class ErrorCode {
  invalid_config,
  parse_error,
  domain_error,
  instance_too_large,
  spawn_failure,
  unparseable_output,
  witness_verification,
  precondition_not_met,
  io_error,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Raised by the text readers; line() is 1-based.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error(ErrorCode::parse_error,
              "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace cardxor

#endif  // CARDXOR_ERROR_HPP
