#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qlb {

// Malformed input text, unknown identifiers, schema violations in files.
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

// Syntax error in a formula string; `position` is a 0-based character offset.
class ParseError : public InputError {
public:
    ParseError(const std::string& what, std::size_t position)
        : InputError(what + " (at offset " + std::to_string(position) + ")"),
          position_(position) {}

    std::size_t position() const { return position_; }

private:
    std::size_t position_;
};

// An operation was called outside its stated precondition
// (zero-measure condition, non-testable wff, state atom where forbidden, ...).
class PreconditionError : public std::runtime_error {
public:
    explicit PreconditionError(const std::string& what) : std::runtime_error(what) {}
};

// A search or enumeration exceeded its configured budget; the result is
// inconclusive, never silently negative.
class BudgetExhausted : public std::runtime_error {
public:
    explicit BudgetExhausted(const std::string& what) : std::runtime_error(what) {}
};

} // namespace qlb
