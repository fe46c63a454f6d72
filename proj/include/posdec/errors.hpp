#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace posdec {

/// A value or operation outside the mathematical domain of the model
/// (non-normalized lottery, utility out of range for a criterion, a
/// criterion applied to the wrong kind of tree, ...).
class DomainError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A document that could not be read.  Position is 1-based when known,
/// 0 when the error is structural rather than lexical.
class ParseError : public std::runtime_error {
public:
  explicit ParseError(const std::string& message, std::size_t line = 0,
                      std::size_t column = 0)
      : std::runtime_error(message), line_(line), column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

private:
  std::size_t line_;
  std::size_t column_;
};

/// An explicitly configured resource limit was exceeded.
class BudgetError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace posdec
