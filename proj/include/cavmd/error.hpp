#pragma once

#include <stdexcept>
#include <string>

namespace cavmd {

// Base for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid argument or violated precondition (bad index, unknown label, dt <= 0, ...).
class InvalidInput : public Error {
public:
    using Error::Error;
};

// Non-finite forces, eigensolver failure, geometry not at a minimum.
class NumericalError : public Error {
public:
    using Error::Error;
};

// Spectral analysis could not produce the requested quantity.
class AnalysisError : public Error {
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

}  // namespace cavmd
