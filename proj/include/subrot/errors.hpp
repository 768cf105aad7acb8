#pragma once

#include <stdexcept>
#include <string>

namespace subrot {

enum class ErrorKind {
  Convergence,     // eigensolver sweep cap reached
  NearSingular,    // spectral function evaluated inside the forbidden band
  AmbiguousCut,    // eigenvalue touches a projection endpoint
  NoGap,           // clusters interleave / overlap
  SingularA,       // 0 in spec(A)
  HintMismatch,    // user gap hint inconsistent with spectrum
  NotPositiveDefinite,
  Domain,          // scalar argument outside its admissible range
  InvalidInput,    // malformed matrices, dimensions, non-finite values
  Internal,        // an invariant that holds by construction was violated
};

const char* to_string(ErrorKind kind) noexcept;

/// Single exception type for the library; `kind()` drives CLI exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what, double value = 0.0)
      : std::runtime_error(what), kind_(kind), value_(value) {}

  ErrorKind kind() const noexcept { return kind_; }
  /// Offending quantity (residual, eigenvalue, ...) when one exists.
  double value() const noexcept { return value_; }

 private:
  ErrorKind kind_;
  double value_;
};

}  // namespace subrot
