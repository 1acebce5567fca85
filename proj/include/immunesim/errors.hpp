#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace immunesim {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Configuration or input that violates a documented invariant.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed configuration text. Carries the 1-based line number.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Non-finite state produced by the time stepper.
class BlowUpError : public std::runtime_error {
 public:
  explicit BlowUpError(const std::string& what, std::optional<std::size_t> step = std::nullopt)
      : std::runtime_error(step ? what + " (step " + std::to_string(*step) + ")" : what), step_(step) {}
  std::optional<std::size_t> step() const noexcept { return step_; }

 private:
  std::optional<std::size_t> step_;
};

/// Convergence study whose errors sit at round-off level, so no order can be read off.
class ResolutionFloorError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input data that cannot support the requested statistic (e.g. constant regressor).
class DegenerateInputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace immunesim
