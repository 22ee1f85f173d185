/**
 * @file types.hpp
 * @brief Scalar types and the exception hierarchy shared by every module.
 */

#ifndef PTEXP_TYPES_HPP
#define PTEXP_TYPES_HPP

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace ptexp {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846264338327950288;

inline bool is_finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

/// Base class of everything this library throws.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Gamma function evaluated at (or within 1e-12 of) a non-positive integer.
class PoleError : public Error {
public:
    using Error::Error;
};

/// No evaluation regime reached the accuracy floor, or a result was not finite.
class EvaluationError : public Error {
public:
    using Error::Error;
};

class NearIntegerOrderError : public EvaluationError {
public:
    using EvaluationError::EvaluationError;
};

/// Normalising denominator of an eigenfunction vanished.
class DivergenceError : public Error {
public:
    using Error::Error;
};

class NoConvergence : public Error {
public:
    using Error::Error;
};

class BracketInvalid : public Error {
public:
    using Error::Error;
};

class TailNotDecayed : public Error {
public:
    using Error::Error;
};

class SolverFailure : public Error {
public:
    using Error::Error;
};

class IndexOutOfRange : public Error {
public:
    using Error::Error;
};

}  // namespace ptexp

#endif
