#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>

namespace fracsource {

/// %.6g, for error messages where std::to_string would print 0.000000.
inline std::string short_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

/// Raised when an argument violates a documented precondition.
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Base class for failures that happen while a solver runs on valid input.
class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A power series did not reach its stopping criterion within the term cap.
class SeriesNotConverged : public SolverError {
public:
    using SolverError::SolverError;
};

/// |g(x0)| is below the point-degeneracy threshold.
class PointDegenerate : public SolverError {
public:
    using SolverError::SolverError;
};

/// An observed trace does not start from zero.
class NonZeroInitialTrace : public SolverError {
public:
    using SolverError::SolverError;
};

/// An iteration's error or residual grew for several consecutive steps.
class Divergence : public SolverError {
public:
    using SolverError::SolverError;
};

/// Every spectral mode fell below the cutoff.
class AllModesCut : public SolverError {
public:
    using SolverError::SolverError;
};

/// The known temporal factor vanishes near the final time.
class DegenerateRho : public SolverError {
public:
    using SolverError::SolverError;
};

/// Iteration parameters K, beta must be strictly positive.
class NonPositiveParams : public SolverError {
public:
    using SolverError::SolverError;
};

}  // namespace fracsource
