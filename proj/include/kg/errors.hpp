#ifndef KG_ERRORS_HPP
#define KG_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace kg {

// Base for everything thrown by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad grid/potential/experiment parameters detected before any computation.
struct InvalidConfigError : Error {
  using Error::Error;
};

// Argument outside the mathematical domain of an operation (negative Bessel
// argument, non-positive sample in a log-log fit, ...).
struct DomainError : Error {
  using Error::Error;
};

// Too few usable samples for a fit.
struct InsufficientDataError : Error {
  using Error::Error;
};

// A stated hypothesis of the estimate being probed does not hold for the
// requested parameters (sigma too small, beta too small, non-regular
// potential in a threshold scan, ...).
struct HypothesisError : InvalidConfigError {
  using InvalidConfigError::InvalidConfigError;
};

// Iterative kernel failed to converge; carries the last iterate gap.
struct NumericalFailureError : Error {
  NumericalFailureError(const std::string& what, double gap)
      : Error(what), last_gap(gap) {}
  double last_gap = 0.0;
};

// Data support plus propagation time would touch the artificial boundary.
struct BoundaryContaminationError : Error {
  using Error::Error;
};

// Spectral parameter on the continuous spectrum without a +i0/-i0 tag.
struct BranchAmbiguityError : Error {
  using Error::Error;
};

// Resolvent requested too close to a discrete eigenvalue.
struct NearSingularError : Error {
  NearSingularError(const std::string& what, double cond)
      : Error(what), condition_estimate(cond) {}
  double condition_estimate = 0.0;
};

// A Klein-Gordon frequency would be non-real (bound state at or below -m^2).
struct InstabilityError : Error {
  using Error::Error;
};

// Riesz contour radius collapsed (clustered eigenvalues).
struct ContourError : Error {
  using Error::Error;
};

}  // namespace kg

#endif
