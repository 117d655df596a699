#pragma once

#include <stdexcept>
#include <string>

namespace tgi {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ShapeMismatch : public Error {
public:
    using Error::Error;
};

class NotSquare : public Error {
public:
    using Error::Error;
};

/// Raised when an SVD fails or receives non-finite entries.
class ConvergenceFailure : public Error {
public:
    using Error::Error;
};

class NotGeneralizedInverse : public Error {
public:
    using Error::Error;
};

class PreconditionViolated : public Error {
public:
    using Error::Error;
};

class RhsNotInRange : public Error {
public:
    using Error::Error;
};

class ModeMismatch : public Error {
public:
    using Error::Error;
};

class InvalidSize : public Error {
public:
    using Error::Error;
};

class FactorizationImpossible : public Error {
public:
    using Error::Error;
};

/// Malformed tensor file, problem spec, or command-line value.
class ParseError : public Error {
public:
    using Error::Error;
};

}  // namespace tgi
