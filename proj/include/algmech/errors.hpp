#pragma once

#include <stdexcept>
#include <string>

namespace algmech {

/// Failed parse of a DSL expression or of a command-line point spec.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, std::size_t offset, int line, int column)
      : std::runtime_error(msg + " at line " + std::to_string(line) +
                           ", column " + std::to_string(column)),
        offset_(offset),
        line_(line),
        column_(column) {}

  std::size_t offset() const { return offset_; }  // 0-based byte offset
  int line() const { return line_; }              // 1-based
  int column() const { return column_; }          // 1-based

 private:
  std::size_t offset_;
  int line_;
  int column_;
};

/// Evaluation left the domain of a primitive (division by zero, log of a
/// non-positive value, ...) or violated an operation's precondition.
class DomainError : public std::runtime_error {
 public:
  explicit DomainError(const std::string& msg, bool located = false)
      : std::runtime_error(msg), located_(located) {}

  // True once the message already names the offending sub-expression.
  bool located() const { return located_; }

 private:
  bool located_ = false;
};

/// Structural problem with an algebroid model definition.
class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A linear solve met a singular matrix (degenerate Lagrangian Hessian).
class SingularError : public std::runtime_error {
 public:
  SingularError(const std::string& msg, double t)
      : std::runtime_error(msg + " at t = " + std::to_string(t)), t_(t) {}

  double time() const { return t_; }

 private:
  double t_ = 0.0;
};

}  // namespace algmech
