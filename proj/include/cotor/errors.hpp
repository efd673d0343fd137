#pragma once

#include <stdexcept>
#include <string>

namespace cotor {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// A documented restriction on the base ring was violated (e.g. injectivity over Z).
class UnsupportedRing : public Error {
 public:
  using Error::Error;
};

class PreconditionFailed : public Error {
 public:
  using Error::Error;
};

/// A bounded search or iteration ran out of budget before reaching its goal.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

class NotInClass : public Error {
 public:
  using Error::Error;
};

class CertificateMissing : public Error {
 public:
  using Error::Error;
};

/// Input data violates a structural invariant (d^2 != 0, ill-defined map, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// An internal postcondition failed. Indicates a bug, never bad input.
class InternalError : public Error {
 public:
  using Error::Error;
};

/// Malformed workspace text; line and column are 1-based.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t col)
      : Error(std::to_string(line) + ":" + std::to_string(col) + ": " + what), line_(line), col_(col) {}
  std::size_t line() const { return line_; }
  std::size_t col() const { return col_; }

 private:
  std::size_t line_, col_;
};

inline void ensure(bool cond, const std::string& what) {
  if (!cond) throw InternalError(what);
}

}  // namespace cotor
