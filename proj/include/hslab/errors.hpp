#pragma once

#include <stdexcept>
#include <string>

namespace hslab {

// Base class for all domain errors raised by the library.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// A parameter bundle violates one of its admissibility constraints.
class ConstraintViolation : public Error {
public:
  explicit ConstraintViolation(const std::string& what) : Error(what) {}
};

// A norm required to be finite and positive is zero, negative or non-finite.
class DegenerateNorm : public Error {
public:
  explicit DegenerateNorm(const std::string& what) : Error(what) {}
};

// Too few sample radii fall inside a requested fit window.
class InsufficientRange : public Error {
public:
  explicit InsufficientRange(const std::string& what) : Error(what) {}
};

// A summability or differentiability exponent is outside its admissible range.
class InvalidExponent : public Error {
public:
  explicit InvalidExponent(const std::string& what) : Error(what) {}
};

// A profile whose tail never halves under dilation; no dilation factor exists.
class NoDecay : public Error {
public:
  explicit NoDecay(const std::string& what) : Error(what) {}
};

// Truncation thresholds disagree with the profile they were built from.
class SpecMismatch : public Error {
public:
  explicit SpecMismatch(const std::string& what) : Error(what) {}
};

// Not enough converged rows to run a fit.
class InsufficientData : public Error {
public:
  explicit InsufficientData(const std::string& what) : Error(what) {}
};

// No admissible interpolation triple exists for the requested rate loss.
class NoSolution : public Error {
public:
  explicit NoSolution(const std::string& what) : Error(what) {}
};

// A verification parameter lies outside the admissible open range.
class InvalidRange : public Error {
public:
  explicit InvalidRange(const std::string& what) : Error(what) {}
};

// Parameters admissible for the fractional family but not for this operation.
class InvalidParams : public Error {
public:
  explicit InvalidParams(const std::string& what) : Error(what) {}
};

// File or directory I/O failure.
class IoError : public Error {
public:
  explicit IoError(const std::string& what) : Error(what) {}
};

}  // namespace hslab
