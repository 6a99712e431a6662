#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ghostgrover {

// Bad caller input: sizes, indices, ranges, mismatched dimensions.
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A value that violates a domain invariant (e.g. an unnormalized state).
class InvalidState : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// Work that would exceed a configured memory/size cap.
class ResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// File could not be opened, read or written.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& source, std::size_t line, std::size_t column, const std::string& what)
        : std::runtime_error(source + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + what),
          line_(line),
          column_(column) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

}  // namespace ghostgrover
