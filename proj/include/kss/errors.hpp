#pragma once

#include <stdexcept>
#include <string>

namespace kss {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of a function.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Argument inside the domain but outside the range the implementation
/// supports (overflow guards, validated parameter envelopes).
class RangeError : public Error {
 public:
  using Error::Error;
};

/// Iterative procedure stopped before reaching its tolerance.
class AccuracyError : public Error {
 public:
  AccuracyError(const std::string& what, double best_estimate)
      : Error(what), best_estimate_(best_estimate) {}
  double best_estimate() const noexcept { return best_estimate_; }

 private:
  double best_estimate_;
};

/// Root bracket without a sign change.
class BracketError : public Error {
 public:
  using Error::Error;
};

/// Physical initialization conditions that admit no state.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

/// Evaluation route not available for the requested arguments.
class UnsupportedMethodError : public Error {
 public:
  using Error::Error;
};

}  // namespace kss
