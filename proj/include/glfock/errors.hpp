#pragma once

#include <stdexcept>
#include <string>

namespace glfock {

/// Root of every exception the library throws.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Argument hits a pole (e.g. 1F1 with b a non-positive integer).
class PoleError : public DomainError {
public:
    using DomainError::DomainError;
};

/// Result not representable in double precision.
class OverflowError : public Error {
public:
    using Error::Error;
};

/// Series or quadrature failed to reach tolerance within its budget.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

/// Power series evaluated outside its disk of convergence.
class DivergenceError : public Error {
public:
    using Error::Error;
};

/// Operation requires an entire phi and got the backward-shift family.
class NonEntireError : public Error {
public:
    using Error::Error;
};

/// Operation requires phi_0 = 1.
class NormalizationError : public Error {
public:
    using Error::Error;
};

/// A (phi, weight) pairing failed its Mellin-moment verification.
class WeightVerificationError : public Error {
public:
    using Error::Error;
};

/// Operation needs a pointwise non-negative weight.
class SignedMeasureError : public Error {
public:
    using Error::Error;
};

class DegreeCapError : public Error {
public:
    using Error::Error;
};

class SingularMatrixError : public Error {
public:
    using Error::Error;
};

/// Density scan window leaves the region covered by the point set.
class MarginError : public Error {
public:
    using Error::Error;
};

/// Malformed run configuration or descriptor JSON.
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace glfock
