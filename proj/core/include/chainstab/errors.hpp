#pragma once

#include <stdexcept>
#include <string>

namespace chainstab {

/// Raised when a scalar function or operation receives an argument outside
/// its domain (non-finite values, non-positive exponents, size mismatches).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A configuration is rejected: scenario keys, parameter invariants, or a
/// Lyapunov certificate that could not be established.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The integrated state became non-finite.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(const std::string& what, double time)
      : std::runtime_error(what), time_(time) {}

  /// Simulation time of the first step that produced a non-finite state.
  double time() const noexcept { return time_; }

 private:
  double time_;
};

}  // namespace chainstab
