#pragma once

#include <stdexcept>
#include <string>

namespace airfoil {

// Root of the project's error taxonomy. Everything thrown on purpose
// derives from this, so the CLI can catch one type and print a clean
// message.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad argument to an operation (index out of range, t outside [0,1], ...).
class ArgumentError : public Error {
 public:
  using Error::Error;
};

// Invalid configuration value or file.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Profile geometry unfit for solving (open loop, self-intersection,
// degenerate panels).
class GeometryError : public Error {
 public:
  using Error::Error;
};

// Attempt to move a control point the constraint mask forbids.
class ConstraintError : public Error {
 public:
  using Error::Error;
};

// Linear system failure or external solver non-convergence.
class SolverError : public Error {
 public:
  using Error::Error;
};

// Operation applied to an object in the wrong state (e.g. stepping a
// finished episode).
class StateError : public Error {
 public:
  using Error::Error;
};

// Unparsable output from an external process.
class ProtocolError : public Error {
 public:
  using Error::Error;
};

// External process exceeded its time budget.
class TimeoutError : public Error {
 public:
  using Error::Error;
};

// External process could not be started.
class SpawnError : public Error {
 public:
  using Error::Error;
};

// Training produced a non-finite loss.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

// Filesystem failure while writing or reading artifacts.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace airfoil
