#ifndef OPUC_ERRORS_HPP
#define OPUC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace opuc {

// Base of every error thrown by the library. The CLI maps the concrete type
// onto its exit code.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Precondition on a value violated (bad degree, |alpha| >= 1, wrong order...).
class ArgumentError : public Error {
public:
    using Error::Error;
};

// Point outside the domain where the quantity is defined (band point for
// Gamma, |z| >= 1 for the Schur function, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

// A numeric procedure produced something unusable (non-finite integrand,
// vanishing denominator).
class NumericError : public Error {
public:
    using Error::Error;
};

// j_{s+1}(z) = 0 in a ratio limit.
class SingularRatioError : public NumericError {
public:
    using NumericError::NumericError;
};

// Two routes that must agree algebraically did not.
class ConsistencyError : public Error {
public:
    using Error::Error;
};

// A checked mathematical property failed on concrete data.
class PropertyViolation : public Error {
public:
    using Error::Error;
};

// Regime the library refuses to handle (Delta = -2 band edges by default).
class UnsupportedCase : public Error {
public:
    using Error::Error;
};

} // namespace opuc

#endif // OPUC_ERRORS_HPP
