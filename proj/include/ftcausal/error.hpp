#pragma once

#include <stdexcept>
#include <string>

namespace ftcausal {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent input to an otherwise well-defined operation.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// A configured enumeration or state-space cap would be exceeded.
class ResourceError : public Error {
 public:
  using Error::Error;
};

// The input is valid but an operation's precondition does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// A causal model does not reproduce the phenomenon it is checked against.
class ReproductionError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

// Document text could not be parsed. `location` is a JSON pointer or a
// byte offset, whichever the failing layer knows.
class ParseError : public Error {
 public:
  ParseError(const std::string& location, const std::string& what)
      : Error(location.empty() ? what : location + ": " + what),
        location_(location),
        detail_(what) {}

  const std::string& location() const { return location_; }
  // The message without the location prefix.
  const std::string& detail() const { return detail_; }

 private:
  std::string location_;
  std::string detail_;
};

}  // namespace ftcausal
