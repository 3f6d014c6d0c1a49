#pragma once

#include <stdexcept>
#include <string>

namespace reso {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    virtual const char* kind() const noexcept { return "error"; }
};

/// Malformed input documents (JSON, CSV, rate-function grammar).
class ParseError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "parse-error"; }
};

/// An argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "domain-error"; }
};

/// A zero of the integrand sits on (or numerically at) an integration contour.
class BoundaryZeroError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "boundary-zero"; }
};

/// Internal consistency failure in a numerical certificate.
class ConsistencyError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "consistency-error"; }
};

/// An iterative construction could not satisfy its constraints.
class InfeasibleError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "infeasible"; }
};

/// Quadrature or series that failed to converge.
class ConvergenceError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "convergence-error"; }
};

/// A node expected to be a simple zero of the generating function is degenerate.
class DegenerateZeroError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "degenerate-zero"; }
};

/// The generating function vanishes on a contour used for a block integral.
class ContourZeroError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "contour-through-zero"; }
};

/// Zeros remain inside a window that was expected to be cleared.
class IncompleteSearchError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "incomplete-search"; }
};

}  // namespace reso
