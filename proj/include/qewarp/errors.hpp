#pragma once

#include <stdexcept>
#include <string>

namespace qewarp {

// Base class for everything this library throws on purpose.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Mismatched or out-of-range dimensions (n < 3, m < 1, size mismatches).
struct DimensionError : Error {
  using Error::Error;
};

// Direction vector is zero, or a causal-class-0 spec carries rho/lambda_F != 0
// where the null reduction forbids them.
struct InvalidDirectionError : Error {
  using Error::Error;
};

// Evaluation outside a profile's domain, or a vanishing function where the
// formulas divide by it (phi = 0, f <= 0, h <= 0 at the requested point).
struct DomainError : Error {
  using Error::Error;
};

// Family parameters that violate an admissibility condition: negative
// discriminant, degenerate exponent a - rN = 0, k + a = 0 at r = 1, C < 0,
// nonpositive scale constants.
struct AdmissibilityError : Error {
  using Error::Error;
};

// Numerical integration could not proceed: step underflow, singularity guard
// tripped at the initial state, or a guarded denominator within tolerance.
struct IntegrationError : Error {
  using Error::Error;
};

// Malformed request to an operation: empty sample set, bad enum value,
// missing grid axes.
struct InvalidRequestError : Error {
  using Error::Error;
};

// Malformed or inconsistent spec/report documents (JSON parsing and schema).
struct SpecError : Error {
  using Error::Error;
};

// A precondition that callers must establish first (e.g. Einstein assembly on
// an uncertified spec).
struct PreconditionError : Error {
  using Error::Error;
};

}  // namespace qewarp
