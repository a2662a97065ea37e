#pragma once

#include <stdexcept>
#include <string>

namespace radonlik {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A dominating-measure id was not registered with the family.
class UnknownMeasureError : public Error {
 public:
  explicit UnknownMeasureError(const std::string& id)
      : Error("unknown dominating measure '" + id + "'") {}
};

/// An argument lies outside the domain of the operation (e.g. an
/// observation outside the sample space).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A documented precondition of an operation does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Quadrature, root bracketing or a normalizer failed numerically.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Every candidate is degenerate: all log-likelihoods are -inf, all Monte
/// Carlo weights vanish, or the effective sample size collapsed.
class DegenerateError : public Error {
 public:
  using Error::Error;
};

/// m(x) = 0: the likelihood vanishes almost everywhere under the prior, so
/// no posterior density exists at this observation.
class VanishingLikelihoodError : public Error {
 public:
  using Error::Error;
};

/// Invalid experiment configuration. The message carries the JSON path.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace radonlik
