#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace plambda {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public Error {
public:
    ParseError(const std::string& message, std::size_t line, std::size_t column)
        : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
          message_(message), line_(line), column_(column) {}

    const std::string& message() const noexcept { return message_; }
    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::string message_;
    std::size_t line_;
    std::size_t column_;
};

/// Evaluation was asked for a term with free variables.
class OpenTermError : public Error {
public:
    using Error::Error;
};

/// A closed non-value term with no applicable rule. Unreachable for well-formed terms.
class StuckTermError : public Error {
public:
    using Error::Error;
};

/// A probability or distribution operation left the [0,1] range.
class InvariantViolation : public Error {
public:
    using Error::Error;
};

/// The breadth-first frontier (or a single term) outgrew the configured limits.
class ResourceLimitError : public Error {
public:
    using Error::Error;
};

/// A distribution cannot be written as a finite distribution term, or a
/// term's semantics is not a distribution over numerals.
class NotRepresentableError : public Error {
public:
    using Error::Error;
};

}  // namespace plambda
