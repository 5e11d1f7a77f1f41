#pragma once

#include <stdexcept>
#include <string>

namespace holo {

// Error hierarchy; the CLI maps these onto exit codes
// (config -> 2, I/O -> 3, numerical/degeneracy -> 4).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Grid dimension mismatches between operands.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// Values outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Phase-step schedule is missing, too short, or not canonical.
class ScheduleError : public Error {
 public:
  using Error::Error;
};

// Requested subset size does not divide the base stack.
class SubsetError : public ScheduleError {
 public:
  using ScheduleError::ScheduleError;
};

// Analysis region out of bounds or too small.
class RegionError : public Error {
 public:
  using Error::Error;
};

// Bar pattern geometry cannot be measured (too few bars, rect too small).
class GeometryError : public Error {
 public:
  using Error::Error;
};

// Object features unresolvable at the requested pixel pitch.
class ResolutionError : public Error {
 public:
  using Error::Error;
};

// Expected counts exceed the camera count representation.
class RangeError : public Error {
 public:
  using Error::Error;
};

// A statistic is undefined (e.g. zero noise in an SNR ratio).
class DegenerateError : public Error {
 public:
  using Error::Error;
};

// Invalid or unknown configuration keys/values.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// File system failures.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace holo
