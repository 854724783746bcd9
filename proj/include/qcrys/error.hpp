#pragma once

#include <stdexcept>
#include <string>

namespace qcrys {

/// Base of every exception thrown by the library. `invariant()` names the
/// contract that was violated, so front ends can emit structured diagnostics.
class Error : public std::runtime_error {
 public:
  Error(std::string invariant, const std::string& what)
      : std::runtime_error(what), invariant_(std::move(invariant)) {}

  const std::string& invariant() const noexcept { return invariant_; }

 private:
  std::string invariant_;
};

/// Caller supplied an argument outside the operation's domain
/// (index out of range, non-dominant weight, non-finite type, bad shape, ...).
class InputError : public Error {
 public:
  using Error::Error;
};

/// A finite horizon (generation or truncation depth) is too small to answer.
class DepthError : public InputError {
 public:
  using InputError::InputError;
};

/// A randomized construction ran out of retries.
class ExhaustedError : public Error {
 public:
  using Error::Error;
};

/// A postcondition recomputed after a construction did not hold. Always a bug.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace qcrys
