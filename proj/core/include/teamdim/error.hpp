#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace teamdim {

// Syntax error with byte offset into the input text.
class ParseError : public std::runtime_error {
public:
    ParseError(std::string msg, std::size_t pos)
        : std::runtime_error(msg + " (at offset " + std::to_string(pos) + ")"), position(pos) {}

    std::size_t position;
};

// Violated precondition or unsatisfiable request (wrong closure class, arity 0, ...).
class DomainError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A configured size cap would be exceeded; never silently truncated.
class CapError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace teamdim
