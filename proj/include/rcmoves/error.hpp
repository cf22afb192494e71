#pragma once

#include <stdexcept>
#include <string>

namespace rcmoves {

// Error taxonomy mirrored by the CLI exit codes:
//   input/parse -> 2, validation -> 3, numerical -> 4.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// The input could not be read or is not in the expected format.
class InputError : public Error {
public:
    using Error::Error;
};

// Malformed content inside an otherwise readable input; carries a line number.
class ParseError : public InputError {
public:
    ParseError(const std::string& msg, std::size_t line)
        : InputError("line " + std::to_string(line) + ": " + msg), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

// A contract violation: bad dimensions, out-of-range values, inconsistent data.
class ValidationError : public Error {
public:
    using Error::Error;
};

// Numerical failure: singular system, divergence, non-finite results.
class NumericalError : public Error {
public:
    using Error::Error;
};

}  // namespace rcmoves
