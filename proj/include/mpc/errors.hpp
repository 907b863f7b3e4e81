#pragma once

#include <stdexcept>
#include <string>

namespace mpc {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// An asymptotic evaluator was asked for a point outside its validity regime.
class RegimeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// No distribution satisfies the moment constraints on the searched support.
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The constraint set does not confine the upper tail (no divergent cost function).
class UnboundedSupportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or invalid run configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mpc
