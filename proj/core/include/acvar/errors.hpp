#pragma once

#include <stdexcept>
#include <string>

namespace acvar {

/// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidDimensionError : Error {
  using Error::Error;
};

struct InvalidParameterError : Error {
  using Error::Error;
};

struct InvalidInputError : Error {
  using Error::Error;
};

/// A row of a transition matrix is not a probability vector.
struct InvalidKernelError : Error {
  using Error::Error;
};

struct InvalidStateError : Error {
  using Error::Error;
};

/// Power iteration for the stationary distribution did not converge
/// (signals a reducible or periodic chain).
struct ConvergenceFailureError : Error {
  using Error::Error;
};

/// Power iteration for the Perron eigenpair did not converge.
struct SpectralFailureError : Error {
  using Error::Error;
};

/// exp(zeta * g(i)) left the representable range; rescale the rewards.
struct TiltOverflowError : Error {
  using Error::Error;
};

/// The requested threshold exceeds every achievable long-run average.
struct UnattainableThresholdError : Error {
  using Error::Error;
};

/// The Monte Carlo conditioning oracle accepted no paths.
struct NoAcceptanceError : Error {
  using Error::Error;
};

/// A realized transition had vanishing probability under the tilted kernel.
struct LikelihoodRatioOverflowError : Error {
  using Error::Error;
};

}  // namespace acvar
