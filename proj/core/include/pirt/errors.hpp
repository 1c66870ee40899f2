#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pirt {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid user input: bad polynomial, malformed text, out-of-range value,
/// inconsistent configuration. Maps to CLI exit code 2.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Text that failed to parse; carries the offending position (0-based
/// character offset, or a line number for line-oriented files).
class ParseError : public ConfigError {
 public:
  ParseError(const std::string& msg, std::size_t pos)
      : ConfigError(msg + " (at position " + std::to_string(pos) + ")"), pos_(pos) {}
  ParseError(const std::string& msg, std::size_t line, bool /*line_tag*/)
      : ConfigError(msg + " (line " + std::to_string(line) + ")"), pos_(line) {}
  std::size_t position() const { return pos_; }

 private:
  std::size_t pos_;
};

/// Internal sanity violation: a fault-free run that reports detection, a
/// shadow register diverging from the golden model, and the like.
/// Maps to CLI exit code 3.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

}  // namespace pirt
