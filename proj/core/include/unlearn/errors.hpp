#pragma once

#include <stdexcept>
#include <string>

namespace unlearn {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ShapeMismatch : public Error {
public:
    using Error::Error;
};

/// Raised when a pivot falls below the relative tolerance during inversion,
/// i.e. the class-mean matrix is (numerically) rank deficient.
class SingularMatrix : public Error {
public:
    using Error::Error;
};

class EmptyInput : public Error {
public:
    using Error::Error;
};

class InvalidParam : public Error {
public:
    using Error::Error;
};

class InvalidClassSet : public Error {
public:
    using Error::Error;
};

class MissingClass : public Error {
public:
    using Error::Error;
};

class InvalidClass : public Error {
public:
    using Error::Error;
};

/// Attack training data contains only one origin label.
class DegenerateData : public Error {
public:
    using Error::Error;
};

class BadMagic : public Error {
public:
    using Error::Error;
};

class CountMismatch : public Error {
public:
    using Error::Error;
};

class TruncatedFile : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

} // namespace unlearn
