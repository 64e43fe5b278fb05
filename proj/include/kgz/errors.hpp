#pragma once

#include <stdexcept>
#include <string>

namespace kgz {

/// Invalid grid, data or run parameters.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the domain of a mathematical operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Derivative requested at a point where the function is not differentiable.
class SingularPointError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// A spectral symbol that is not finite on the lattice.
class SymbolError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Least-squares fit with degenerate or insufficient abscissae.
class FitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Requested time window not covered by the available data.
class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Non-finite values appeared during time integration.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(double time, double max_norm)
      : std::runtime_error("integration diverged at t = " + std::to_string(time) +
                           " (max-norm " + std::to_string(max_norm) + ")"),
        time_(time),
        max_norm_(max_norm) {}

  double time() const noexcept { return time_; }
  double max_norm() const noexcept { return max_norm_; }

 private:
  double time_;
  double max_norm_;
};

}  // namespace kgz
