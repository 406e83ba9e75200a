#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace phc {

/// Input outside the mathematical domain of an operation (negative wavelength, ...).
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// A geometry spec violates one of its design constraints.
class DesignError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Solver or command configuration is invalid.
class ConfigError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// All-zero field where a normalized field integral is required.
class DegenerateFieldError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class PreconditionError : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

/// Loss budget calibration is self-inconsistent (device transmits more than the setup).
class CalibrationError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

class DivergenceError : public std::runtime_error {
public:
  explicit DivergenceError(std::int64_t step)
      : std::runtime_error("field diverged at step " + std::to_string(step)), step_(step) {}

  std::int64_t step() const noexcept { return step_; }

private:
  std::int64_t step_;
};

}  // namespace phc
