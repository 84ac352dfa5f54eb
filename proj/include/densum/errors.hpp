#pragma once

#include <stdexcept>
#include <string>

namespace densum {

// Thrown when externally supplied data fails re-verification
// (e.g. a factor-table line whose product or primality check fails).
// The CLI maps this to exit code 3.
class VerificationError : public std::runtime_error {
public:
    explicit VerificationError(const std::string& what) : std::runtime_error(what) {}
};

// Malformed input file; carries the 1-based line number.
class ParseError : public std::runtime_error {
public:
    ParseError(int line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

} // namespace densum
