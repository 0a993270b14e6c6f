#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pouchsim {

/// Input violates a documented precondition or domain bound.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A file could not be read, written, or parsed.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed text input, located by 1-based line and column.
class ParseError : public IoError {
public:
    ParseError(std::size_t line, std::size_t column, const std::string& what)
        : IoError("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
          line_(line),
          column_(column) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

/// Model file is well formed but incompatible with this build.
class FormatError : public IoError {
public:
    using IoError::IoError;
};

/// Every design in a search was rejected by the feasibility constraints.
class NoFeasibleDesign : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace pouchsim
