#pragma once

#include <stdexcept>
#include <string>

namespace lpflow {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad argument value (out-of-range index, invalid norm parameters, ...).
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// Field passed in the wrong representation (physical vs spectral).
class RepresentationError : public Error {
 public:
  using Error::Error;
};

/// Malformed or truncated LPF1 file.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Ratio verifier called with input that makes the ratio 0/0 or x/0.
class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

/// Auxiliary grid too coarse for the requested computation.
class ResolutionError : public Error {
 public:
  using Error::Error;
};

/// CFL guard violated during time stepping.
class StabilityError : public Error {
 public:
  StabilityError(const std::string& what, double time, int member = -1)
      : Error(what), time_(time), member_(member) {}

  double time() const noexcept { return time_; }
  /// Ladder member index, or -1 when raised by the plain Euler solver.
  int member() const noexcept { return member_; }

 private:
  double time_;
  int member_;
};

}  // namespace lpflow
