#pragma once

#include <stdexcept>
#include <string>

namespace dnet {

// Base class for every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed or inconsistent input: bad dimensions, bad subsets, out-of-range parameters.
class ValidationError : public Error {
public:
    using Error::Error;
};

// Input text that does not follow a documented file grammar.
class ParseError : public ValidationError {
public:
    ParseError(int line, const std::string& what)
        : ValidationError("line " + std::to_string(line) + ": " + what), line_(line) {}

    int line() const noexcept { return line_; }

private:
    int line_;
};

class IoError : public Error {
public:
    using Error::Error;
};

// A computation would exceed a fixed resource limit (enumeration size, memory).
class ResourceError : public Error {
public:
    using Error::Error;
};

}  // namespace dnet
