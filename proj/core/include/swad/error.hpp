#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace swad {

// Precondition violated by the caller (bad sizes, out-of-range parameters).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Input exceeds what a desk-scale exact solver is allowed to handle.
class SizeLimitError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

// NaN/Inf where finite values are required.
class NumericError : public std::runtime_error {
 public:
  NumericError(const std::string& what, std::size_t row, std::size_t column)
      : std::runtime_error(what), row_(row), column_(column) {}

  std::size_t row() const noexcept { return row_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t row_;
  std::size_t column_;
};

// Malformed CSV. Row is the 0-based data row (header excluded), column is 0-based.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t row, std::size_t column)
      : std::runtime_error(what), row_(row), column_(column) {}

  std::size_t row() const noexcept { return row_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t row_;
  std::size_t column_;
};

// A CSV cell that parses as a number but is NaN or infinite.
class NonFiniteCell : public ParseError {
 public:
  using ParseError::ParseError;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace swad
