// SPDX-License-Identifier: Apache-2.0
#ifndef RADIALBORN_ERRORS_HPP
#define RADIALBORN_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace rb {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Malformed input file or out-of-schema field (CLI exit code 4).
class SchemaError : public Error {
public:
    using Error::Error;
};

/// Any failure of a numeric routine (CLI exit code 3).
class NumericError : public Error {
public:
    using Error::Error;
};

/// Evaluation requested at a flagged singularity.
class DomainError : public NumericError {
public:
    using NumericError::NumericError;
};

/// Too few samples to apply the requested stencil.
class InsufficientDataError : public NumericError {
public:
    using NumericError::NumericError;
};

/// Non-integrable singularity in a quadrature request.
class DivergenceError : public NumericError {
public:
    using NumericError::NumericError;
};

/// Conductivity family parameters outside the admissible set.
class DegenerateFamilyError : public NumericError {
public:
    using NumericError::NumericError;
};

/// Conductivity not bounded away from zero.
class EllipticityError : public NumericError {
public:
    using NumericError::NumericError;
};

/// Weyl function requested too close to a Dirichlet eigenvalue.
class NearEigenvalueError : public NumericError {
public:
    using NumericError::NumericError;
};

/// ODE integration did not reach the requested point/tolerance.
class SolverError : public NumericError {
public:
    using NumericError::NumericError;
};

/// Series or quadrature tail estimate above the requested tolerance.
class TruncationError : public NumericError {
public:
    using NumericError::NumericError;
};

} // namespace rb

#endif
