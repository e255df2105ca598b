#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace cmatch {

// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Violated precondition or invalid argument (unknown agent id, incomplete
// ranking, bad quota, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

// Malformed or semantically invalid input file.
class InputError : public Error {
public:
    using Error::Error;
};

// An enumeration request exceeded the configured budget. Carries the size
// that was computed before refusing.
class GuardrailError : public Error {
public:
    GuardrailError(const std::string& what, std::uint64_t computed_size)
        : Error(what), computed_size(computed_size) {}
    std::uint64_t computed_size;
};

// A should-be-unreachable state; indicates a bug, not a user error.
class InternalError : public Error {
public:
    using Error::Error;
};

}  // namespace cmatch
