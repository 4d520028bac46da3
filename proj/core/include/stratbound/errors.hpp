#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace stratbound {

/// Raised when an operation receives an argument outside its domain
/// (unknown state, action outside a repertoire, invalid model, ...).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised by the text parsers. `line` and `column` are 1-based; 0 means
/// the position is not known.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::size_t line, std::size_t column = 0)
      : std::runtime_error(format(message, line, column)), line_(line), column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  static std::string format(const std::string& message, std::size_t line, std::size_t column) {
    std::string out;
    if (line != 0) {
      out += "line " + std::to_string(line);
      if (column != 0) out += ", column " + std::to_string(column);
      out += ": ";
    }
    return out + message;
  }

  std::size_t line_;
  std::size_t column_;
};

/// Objective outside the safety/reachability fragment handled by exact
/// checking and synthesis.
class UnsupportedObjective : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Base of the failures a strategy machine run can end in.
class MachineError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The step budget ran out before the machine produced an action.
class BudgetExceeded : public MachineError {
 public:
  using MachineError::MachineError;
};

/// The machine stopped without a well-formed action on its output.
class MalformedOutput : public MachineError {
 public:
  using MachineError::MachineError;
};

/// A strategy program faulted (division by zero, bad index, fell off the end).
class ProgramFault : public MalformedOutput {
 public:
  using MalformedOutput::MalformedOutput;
};

/// The produced action is not available to the agent at its current observation.
class IllegalAction : public MachineError {
 public:
  using MachineError::MachineError;
};

}  // namespace stratbound
