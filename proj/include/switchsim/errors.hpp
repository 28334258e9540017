#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace switchsim {

/// Packet and multiplicity counts.
using Count = std::int64_t;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the documented domain of an operation.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Exhaustive oracles refuse instances beyond their enumeration bounds.
class InstanceTooLarge : public Error {
 public:
  using Error::Error;
};

class InfeasibleSchedule : public Error {
 public:
  using Error::Error;
};

/// Raised when an internal invariant breaks; indicates corrupted input or a bug.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

/// Batching parameters violate a phase-length or constant condition.
class InvalidRegime : public Error {
 public:
  explicit InvalidRegime(std::string condition)
      : Error("invalid regime: " + condition), condition_(std::move(condition)) {}

  const std::string& condition() const noexcept { return condition_; }

 private:
  std::string condition_;
};

class InfeasibleSubintervals : public Error {
 public:
  using Error::Error;
};

class UnstableInput : public Error {
 public:
  using Error::Error;
};

}  // namespace switchsim
