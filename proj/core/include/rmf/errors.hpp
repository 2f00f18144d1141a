#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace rmf {

// Base of every library exception. The three direct children map onto the
// CLI exit-code contract: UsageError -> 2, NumericalError -> 3, IoError -> 4.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct UsageError : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

struct NumericalError : Error {
    using Error::Error;
};

// Mismatched ambient dimensions (e.g. inner product of R^3 and R^4 vectors).
struct DimensionError : UsageError {
    DimensionError(int lhs, int rhs)
        : UsageError("dimension mismatch: " + std::to_string(lhs) + " vs " + std::to_string(rhs)),
          lhs_dim(lhs), rhs_dim(rhs) {}
    int lhs_dim;
    int rhs_dim;
};

// Parameter outside the usable domain (after shrinking for stencil width).
struct DomainError : NumericalError {
    using NumericalError::NumericalError;
};

// A division-guarded quantity vanished; carries the offending parameters.
struct SingularityError : NumericalError {
    SingularityError(const std::string& what, std::vector<double> where_)
        : NumericalError(what), where(std::move(where_)) {}
    std::vector<double> where;
};

// Derivatives too linearly dependent to span a frame; carries the Gram determinant.
struct DegeneracyError : NumericalError {
    DegeneracyError(const std::string& what, double gram)
        : NumericalError(what), gram_determinant(gram) {}
    double gram_determinant = 0.0;
};

// Integration step too coarse for the requested curvature magnitudes.
struct AccuracyError : NumericalError {
    using NumericalError::NumericalError;
};

struct InsufficientDataError : NumericalError {
    using NumericalError::NumericalError;
};

struct GridMismatchError : NumericalError {
    using NumericalError::NumericalError;
};

// A coefficient expected to be constant varies beyond tolerance.
struct NotConstantError : NumericalError {
    NotConstantError(const std::string& what, double variation_)
        : NumericalError(what), variation(variation_) {}
    double variation = 0.0;
};

struct ZeroVectorError : NumericalError {
    using NumericalError::NumericalError;
};

struct FitDegeneracyError : NumericalError {
    using NumericalError::NumericalError;
};

}  // namespace rmf
