#pragma once

#include <stdexcept>
#include <string>

namespace biharm {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A point, or a finite-difference stencil around it, left the chart domain.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Metric not positive definite, or condition number beyond the guard.
class SingularMetricError : public Error {
public:
    using Error::Error;
};

/// Operation not defined in this dimension (e.g. tension formulas need n > 2).
class DimensionError : public Error {
public:
    using Error::Error;
};

/// Invalid arguments that are not geometric in nature.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// ODE integration diverged or produced non-finite values.
class BlowUpError : public Error {
public:
    using Error::Error;
};

} // namespace biharm
