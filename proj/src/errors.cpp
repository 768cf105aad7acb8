#include "subrot/errors.hpp"

namespace subrot {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Convergence: return "convergence-failure";
    case ErrorKind::NearSingular: return "near-singular";
    case ErrorKind::AmbiguousCut: return "ambiguous-cut";
    case ErrorKind::NoGap: return "no-gap";
    case ErrorKind::SingularA: return "singular-A";
    case ErrorKind::HintMismatch: return "hint-mismatch";
    case ErrorKind::NotPositiveDefinite: return "not-positive-definite";
    case ErrorKind::Domain: return "domain";
    case ErrorKind::InvalidInput: return "invalid-input";
    case ErrorKind::Internal: return "internal";
  }
  return "unknown";
}

}  // namespace subrot
