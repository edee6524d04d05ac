#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lifopr {

/// A formula was evaluated outside its domain (load >= 1, wrong server count,
/// service laws that do not satisfy a closed form's precondition).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Malformed model or trace supplied by the caller.
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Scenario text could not be parsed. line() is 1-based, 0 when the error is
/// not tied to one line (e.g. a file with no class lines).
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
          line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

} // namespace lifopr
