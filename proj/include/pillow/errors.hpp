#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pillow {

// Base class for all library errors. Each subclass maps onto one CLI exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  explicit ParseError(const std::string& msg, std::size_t pos = npos)
      : Error(pos == npos ? msg : msg + " at position " + std::to_string(pos)), pos_(pos) {}
  std::size_t position() const { return pos_; }

 private:
  std::size_t pos_;
};

// Bad arguments or violated preconditions (non-unimodular matrix, earring of a
// non-corner arc, cochain on a curve without self-intersections, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// Non-transverse configuration; the message names the offending segments.
class TransversalityError : public Error {
 public:
  using Error::Error;
};

class BudgetError : public Error {
 public:
  using Error::Error;
};

// d^2 != 0 or another internal consistency check failed.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

class OracleToleranceError : public Error {
 public:
  using Error::Error;
};

}  // namespace pillow
