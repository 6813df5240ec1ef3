#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace btkit {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parameter violates a documented precondition (a = 0, omega <= 0, ...).
class InvalidParameterError : public Error {
 public:
  using Error::Error;
};

/// A field could not be evaluated at a point (log of a non-positive number,
/// singular matrix, non-finite value). Carries the offending coordinates.
class SingularPointError : public Error {
 public:
  SingularPointError(const std::string& what, std::vector<double> point)
      : Error(what), point_(std::move(point)) {}

  const std::vector<double>& point() const noexcept { return point_; }

 private:
  std::vector<double> point_;
};

/// Every sample of a residual scan was singular.
class EmptyDomainError : public Error {
 public:
  using Error::Error;
};

/// tau . E0 != 0 for a plane-wave spec. Never silently projected away.
class NonTransverseError : public Error {
 public:
  NonTransverseError(const std::string& what, double dot_magnitude)
      : Error(what), dot_(dot_magnitude) {}

  double dot_magnitude() const noexcept { return dot_; }

 private:
  double dot_;
};

/// Propagation direction is not a unit vector.
class NonUnitDirectionError : public Error {
 public:
  using Error::Error;
};

/// ExpSeed constructed from matrices with [A, B] != 0.
class NonCommutingError : public Error {
 public:
  NonCommutingError(const std::string& what, double commutator_norm)
      : Error(what), norm_(commutator_norm) {}

  double commutator_norm() const noexcept { return norm_; }

 private:
  double norm_;
};

/// The x-then-t and t-then-x line integrals disagree: the integrand is not
/// curl-free, i.e. an integrability condition is violated.
class PathDependenceError : public Error {
 public:
  PathDependenceError(const std::string& what, double disagreement, int level = -1)
      : Error(what), disagreement_(disagreement), level_(level) {}

  double disagreement() const noexcept { return disagreement_; }
  /// Hierarchy level that failed, or -1 outside a hierarchy.
  int level() const noexcept { return level_; }

 private:
  double disagreement_;
  int level_;
};

}  // namespace btkit
