#pragma once

#include <stdexcept>
#include <string>

namespace scalecalc {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A time point is not a member of the time-scale it was looked up in.
class DomainError : public Error {
public:
    using Error::Error;
};

/// An input has too few points (or levels) for the requested operation.
class SizeError : public Error {
public:
    using Error::Error;
};

/// A numeric parameter lies outside its admissible range.
class ParameterError : public Error {
public:
    using Error::Error;
};

/// Integration bounds given in the wrong order.
class OrderError : public Error {
public:
    using Error::Error;
};

/// The operation is only defined for a different refinement kind.
class UnsupportedRefinement : public Error {
public:
    using Error::Error;
};

/// A finite observation is too short for the request.
class InsufficientData : public Error {
public:
    using Error::Error;
};

/// Requested depth exceeds a finite complexity pattern.
class PatternExhausted : public Error {
public:
    using Error::Error;
};

/// An operation was applied to an object it was not designed for.
class MisuseError : public Error {
public:
    using Error::Error;
};

/// Malformed text input (rational literals, manifests, CSV, sequence files).
class ParseError : public Error {
public:
    using Error::Error;
};

}  // namespace scalecalc
