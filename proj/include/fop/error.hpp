#pragma once

#include <stdexcept>
#include <string>

namespace fop {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A pivot column was exactly zero during factorization.
class SingularMatrix : public Error {
public:
    using Error::Error;
};

/// Spectral or finite-element system could not be solved.
class SingularSystem : public Error {
public:
    using Error::Error;
};

class InvalidKappa : public Error {
public:
    using Error::Error;
};

class DuplicateNodes : public Error {
public:
    using Error::Error;
};

/// A coefficient function did not resolve to a Chebyshev expansion
/// with a tail below the resolution threshold.
class UnresolvedCoefficient : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

/// Bad experiment configuration (maps to CLI exit code 1).
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace fop
