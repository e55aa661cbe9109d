#pragma once

#include <stdexcept>
#include <string>

namespace carfollow {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed configuration, units, or scenario setup.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Non-finite kinematic state fed into a core operation.
class InvalidStateError : public Error {
 public:
  using Error::Error;
};

// A documented operation precondition was violated (e.g. eps > tau for the
// Newell family).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// The model is undefined at the given state (IDM singular input, Gipps
// negative discriminant, 0/0 time gap). Carries a short machine-readable kind
// so harness reports can tabulate domain failures.
class DomainError : public Error {
 public:
  DomainError(std::string kind, const std::string& message)
      : Error(message), kind_(std::move(kind)) {}
  const std::string& kind() const { return kind_; }

 private:
  std::string kind_;
};

// Requested analysis has no defined answer for the model (e.g. closed-form
// fundamental diagram for the IDM).
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

// Iterative search failed (bisection bracket, steady-state detection).
class SearchError : public Error {
 public:
  using Error::Error;
};

}  // namespace carfollow
