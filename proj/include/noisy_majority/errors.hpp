#pragma once

#include <stdexcept>
#include <string>

namespace noisy_majority {

// Every failure the library reports derives from Error so callers can
// separate domain failures from std exceptions.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

class NonIntegralStubbornSize : public Error {
public:
    using Error::Error;
};

class InvalidEpsilon : public Error {
public:
    using Error::Error;
};

class CapExceeded : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

class SingularSystem : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(const std::string& what, int line = -1)
        : Error(line >= 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
    int line() const noexcept { return line_; }

private:
    int line_;
};

class ValidationError : public Error {
public:
    using Error::Error;
};

class MissingTrajectory : public Error {
public:
    using Error::Error;
};

}  // namespace noisy_majority
