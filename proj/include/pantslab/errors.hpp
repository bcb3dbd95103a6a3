#pragma once

#include <stdexcept>
#include <string>

namespace pantslab {

// Base for every library error; CLI maps subclasses to exit codes.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Input outside a function's documented domain (bad length, bad parameter).
struct DomainError : Error {
  using Error::Error;
};

// A computation left its accuracy envelope (residual gate, subdivision cap).
struct NumericalError : Error {
  using Error::Error;
};

// Foliation patch construction outside its admissible regime.
struct AdmissibilityError : Error {
  using Error::Error;
};

// Operation not defined for the surface family (finite tables have no exhaustion).
struct UnsupportedSurface : Error {
  using Error::Error;
};

// A declared generator (custom periodic graph) is structurally invalid.
struct GeneratorError : Error {
  using Error::Error;
};

// Lookup beyond a finite table.
struct IndexError : Error {
  using Error::Error;
};

// A criterion was invoked without its certified hypothesis.
struct PreconditionError : Error {
  using Error::Error;
};

// Lazy generation exceeded a configured cap.
struct ResourceError : Error {
  using Error::Error;
};

// Malformed user input (CLI flags, spec files).
struct ValidationError : Error {
  using Error::Error;
};

}  // namespace pantslab
