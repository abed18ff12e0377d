#pragma once

#include <stdexcept>
#include <string>

namespace discsym {

/// Input outside the mathematical domain of an operation (point outside the
/// disc, negative time, invalid radius, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Evaluation at a singular configuration, e.g. green(x, x).
class SingularityError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Invalid polygon or boundary: self-intersection, exit from the disc, too few
/// vertices.
class GeometryError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// A level that was required to be regular is (numerically) critical.
class RegularityError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// A hypothesis of an analysis step does not hold for the supplied data.
class PreconditionError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Malformed input file or argument.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Solver or quadrature failure: non-convergence, singular Jacobian, large
/// residual.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Newton iteration close to a bifurcation point (Jacobian numerically
/// singular).
class BifurcationProximityError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace discsym
