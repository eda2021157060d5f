#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace priornet {

// Structured text input (CSV dataset, checkpoint, config) failed to parse.
// Line and column are 1-based positions of the offending token.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : std::runtime_error(what + " (line " + std::to_string(line) + ", column " +
                           std::to_string(column) + ")"),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

// Training produced a non-finite loss. Carries enough state to locate the
// failing step when replaying with the same seed.
class NumericError : public std::runtime_error {
 public:
  NumericError(const std::string& what, std::size_t step, double learning_rate,
               std::size_t batch_index)
      : std::runtime_error(what + " (step " + std::to_string(step) + ", lr " +
                           std::to_string(learning_rate) + ", batch " +
                           std::to_string(batch_index) + ")"),
        step_(step),
        learning_rate_(learning_rate),
        batch_index_(batch_index) {}

  std::size_t step() const { return step_; }
  double learning_rate() const { return learning_rate_; }
  std::size_t batch_index() const { return batch_index_; }

 private:
  std::size_t step_;
  double learning_rate_;
  std::size_t batch_index_;
};

}  // namespace priornet
