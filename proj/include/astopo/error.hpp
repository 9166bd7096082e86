#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace astopo {

// Base for every error the library raises.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed input text. line() is 1-based, 0 when not tied to a line.
class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& what)
        : Error(line ? "line " + std::to_string(line) + ": " + what : what),
          line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class IoError : public Error {
public:
    using Error::Error;
};

// Argument outside the operation's domain (e.g. the Unresolved AS).
class DomainError : public Error {
public:
    using Error::Error;
};

class NotFoundError : public Error {
public:
    using Error::Error;
};

class ParameterError : public Error {
public:
    using Error::Error;
};

// Input violates a structural invariant another module should have enforced.
class ConsistencyError : public Error {
public:
    using Error::Error;
};

}  // namespace astopo
