#pragma once

#include <stdexcept>
#include <string>

namespace veracity {

// Base of every error thrown by the library. The CLI maps these to exit code 2.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed input file or record.
class ParseError : public Error {
public:
    using Error::Error;
};

// Arguments violating an operation's preconditions.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

// Tensor shape mismatch in the nn kernels.
class ShapeError : public Error {
public:
    using Error::Error;
};

// Failure of an external model service or its cache.
class ServiceError : public Error {
public:
    using Error::Error;
};

// Replay-mode lookup of a response that was never recorded.
class CacheMiss : public ServiceError {
public:
    using ServiceError::ServiceError;
};

// Non-finite value produced by a numeric routine.
class NumericError : public Error {
public:
    using Error::Error;
};

}  // namespace veracity
