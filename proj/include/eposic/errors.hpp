#pragma once

#include <stdexcept>
#include <string>

namespace eposic {

// Shape/domain errors thrown by the exact linear algebra layer.
struct ShapeMismatch : std::invalid_argument {
  explicit ShapeMismatch(const std::string& what) : std::invalid_argument(what) {}
};

// sqrt of a negative rational.
struct NegativeRadicand : std::domain_error {
  explicit NegativeRadicand(const std::string& what) : std::domain_error(what) {}
};

// Sign query on a scalar with a nonzero imaginary component.
struct NotReal : std::domain_error {
  explicit NotReal(const std::string& what) : std::domain_error(what) {}
};

// (m,n,h) outside 0 <= h <= min(m,n), or negative degrees.
struct InvalidIndex : std::invalid_argument {
  explicit InvalidIndex(const std::string& what) : std::invalid_argument(what) {}
};

// Degree bound violated (e.g. m = 0 where m >= 1 is required).
struct InvalidDegree : std::invalid_argument {
  explicit InvalidDegree(const std::string& what) : std::invalid_argument(what) {}
};

// Vector is not a unit vector where one is required.
struct NotUnit : std::invalid_argument {
  explicit NotUnit(const std::string& what) : std::invalid_argument(what) {}
};

// Text that does not match the canonical scalar/label grammar.
struct ParseError : std::invalid_argument {
  explicit ParseError(const std::string& what) : std::invalid_argument(what) {}
};

// An internal cross-check between two independent constructions failed.
// Reaching this indicates a bug, never bad user input.
struct InternalCheckFailure : std::logic_error {
  explicit InternalCheckFailure(const std::string& what) : std::logic_error(what) {}
};

}  // namespace eposic
