#pragma once

#include <stdexcept>
#include <string>

namespace geolab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad grid size, bad tolerance override, malformed configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Extension evaluated too close to the unit circle.
class RimError : public Error {
 public:
  using Error::Error;
};

class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// A parameter set violates a structural invariant of its class.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// The boundary symbol of h is not real on the constrained components.
class ClassViolation : public Error {
 public:
  using Error::Error;
};

/// Raised by the geodesic pipeline, e.g. an empty support set at a node.
class PipelineError : public Error {
 public:
  using Error::Error;
};

/// An atom direction outside the cone S_D.
class ConeError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Support set is a face rather than a single point.
class NonSingletonSupport : public Error {
 public:
  using Error::Error;
};

}  // namespace geolab
