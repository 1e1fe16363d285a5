#pragma once

#include <stdexcept>
#include <string>

namespace garding {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Parameter outside the documented range (bad k, rho = 0, n < 3, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// A point lies outside the cone on which the requested quantity is defined.
class InfeasiblePoint : public Error {
public:
    using Error::Error;
};

/// No bracket for a scalar root (c_tilde, psi outside the attainable range).
class RangeError : public Error {
public:
    using Error::Error;
};

/// A cone predicate behaved inconsistently with the cone axioms.
class InternalConsistencyError : public Error {
public:
    using Error::Error;
};

/// The level-set sampler rejected too many directions.
class SamplerStarved : public Error {
public:
    using Error::Error;
};

/// A documented precondition of an operation was violated by its inputs.
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// A solver produced output violating a proven invariant (a solver bug).
class InvariantBreach : public Error {
public:
    using Error::Error;
};

class EstimateUnavailable : public Error {
public:
    using Error::Error;
};

/// Malformed configuration file or command line.
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace garding
