#pragma once

#include <stdexcept>
#include <string>

namespace anc {

// Base for every domain failure raised by this library. Precondition abuse
// (bad sizes, nonpositive amplitudes, malformed config) throws
// std::invalid_argument instead.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A sample too close to zero to carry a phase.
class DegenerateSampleError : public Error {
 public:
  using Error::Error;
};

// Superposition was requested but the two signals never overlap.
class NoInterferenceError : public Error {
 public:
  using Error::Error;
};

// |D| exceeded 1 by more than the clamp tolerance: the supplied amplitudes
// cannot explain the observed sample energy.
class InconsistentAmplitudesError : public Error {
 public:
  using Error::Error;
};

// Moment statistics violate the two-signal model (e.g. derived product
// AB <= 0 or a negative radicand).
class InconsistentStatisticsError : public Error {
 public:
  using Error::Error;
};

// Energy-jump threshold is below the configured noise floor; transformation
// detection would only pick up noise.
class UndetectableTransformationsError : public Error {
 public:
  using Error::Error;
};

// Both candidate squared amplitudes of an event collapsed to zero.
class DegenerateEventError : public Error {
 public:
  using Error::Error;
};

// Event angle too close to 0 or pi: the two amplitude branches cannot be
// told apart.
class AmbiguousEventError : public Error {
 public:
  using Error::Error;
};

// An estimator ran but produced no usable result.
class EstimationFailedError : public Error {
 public:
  using Error::Error;
};

// decode_packet could not produce bits for the other party.
class DecodeFailedError : public Error {
 public:
  using Error::Error;
};

// Filesystem-level failure (unwritable output path and the like).
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace anc
