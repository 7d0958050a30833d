#ifndef HARDLABEL_ERRORS_H_
#define HARDLABEL_ERRORS_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hardlabel {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class EmptyInputError : public Error {
 public:
  using Error::Error;
};

class LengthMismatchError : public Error {
 public:
  LengthMismatchError(std::size_t lhs, std::size_t rhs)
      : Error("length mismatch: " + std::to_string(lhs) + " vs " +
              std::to_string(rhs)) {}
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Malformed input file. `line` is 1-based, 0 when not tied to a line.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class InvalidArgumentError : public Error {
 public:
  using Error::Error;
};

// Raised when a query would take the ledger past the budget. Never reaches
// the victim.
class BudgetExhaustedError : public Error {
 public:
  BudgetExhaustedError() : Error("query budget exhausted") {}
};

// The victim could not produce a label (e.g. remote timeout after retries).
class VictimFailureError : public Error {
 public:
  using Error::Error;
};

}  // namespace hardlabel

#endif  // HARDLABEL_ERRORS_H_
