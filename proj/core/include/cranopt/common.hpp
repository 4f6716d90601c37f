#ifndef CRANOPT_COMMON_HPP
#define CRANOPT_COMMON_HPP

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace cranopt {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of a formula (e.g. non-positive distance).
class DomainError : public Error {
public:
    using Error::Error;
};

/// A document or configuration violates a type invariant.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Array shapes in a document or call do not agree.
class DimensionError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// Fewer active BBUs than the processing demand requires.
class CapacityError : public Error {
public:
    using Error::Error;
};

/// A user has zero SINR, so its resource fraction is unbounded.
class DivergentLoadError : public DomainError {
public:
    using DomainError::DomainError;
};

/// Random scenario generation could not satisfy its geometric constraints.
class GenerationError : public Error {
public:
    using Error::Error;
};

/// A linear system in the solver is numerically singular.
class MatrixError : public Error {
public:
    using Error::Error;
};

/// A requested computation exceeds a configured size guard.
class GuardError : public Error {
public:
    using Error::Error;
};

inline constexpr double kLn2 = std::numbers::ln2;

inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double watts_to_dbm(double watts) { return 10.0 * std::log10(watts) + 30.0; }
inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

/// log2(1 + v), accurate for small v.
inline double log2_1p(double v) { return std::log1p(v) / kLn2; }

}  // namespace cranopt

#endif  // CRANOPT_COMMON_HPP
