#pragma once

#include <stdexcept>
#include <string>

namespace procmine {

/// Base class for every error caused by bad input (malformed files,
/// violated preconditions). The CLI maps these to exit code 1.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Syntax or structure error in a text format. Carries the 1-based line
/// when one is known (0 otherwise).
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line = 0)
        : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class ValidationError : public Error {
public:
    using Error::Error;
};

/// No final marking is reachable from the initial marking.
class ModelInfeasible : public Error {
public:
    using Error::Error;
};

}  // namespace procmine
