#pragma once

#include <stdexcept>
#include <string>

namespace ares {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input text (CSV cell, ARFF header, config line).
class ParseError : public Error {
public:
    using Error::Error;
};

/// Input uses a format feature the loaders do not handle (string attributes, sparse rows, ...).
class UnsupportedFeatureError : public Error {
public:
    using Error::Error;
};

/// Operand shapes disagree (feature count, label length, point dimensionality).
class DimensionError : public Error {
public:
    using Error::Error;
};

/// A parameter violates its documented range.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

} // namespace ares
