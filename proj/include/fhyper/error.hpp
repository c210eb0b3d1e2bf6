#pragma once

#include <stdexcept>
#include <string>

namespace fhyper {

/// A caller violated an operation's precondition (bad degree, mismatched sizes, ...).
class PreconditionError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical construction could not be completed (rank deficiency, divergence).
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed input file or configuration text.
class ParseError : public std::runtime_error {
public:
  ParseError(const std::string &what, int line = 0, int column = 0)
      : std::runtime_error(what), line_(line), column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

private:
  int line_;
  int column_;
};

} // namespace fhyper
