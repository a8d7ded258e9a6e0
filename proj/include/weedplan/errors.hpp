#pragma once

#include <stdexcept>
#include <string>

namespace weedplan {

/// Invalid numeric parameter handed to a generator or model function.
class ParameterError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Malformed input text. Carries the 1-based line number when known.
class ParseError : public std::runtime_error {
  public:
    ParseError(const std::string &what, std::size_t line)
        : std::runtime_error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

  private:
    std::size_t line_;
};

/// Well-formed input that breaks a domain invariant (e.g. plant outside the lane).
class ValidationError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class InsufficientDataError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Target already behind the tool line.
class PastTargetError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Planner instance too large for the requested algorithm.
class SizeError : public std::length_error {
  public:
    using std::length_error::length_error;
};

class ConfigError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

} // namespace weedplan
