#pragma once
// Error type shared across the library. Every failure carries a stable code
// string (e.g. "DivisionByZero", "NotConvenient") that tests and the CLI
// dispatch on, plus a human-readable detail message.

#include <stdexcept>
#include <string>
#include <utility>

namespace germ {

class CalcError : public std::runtime_error {
public:
    CalcError(std::string code, const std::string& detail)
        : std::runtime_error(code + ": " + detail), code_(std::move(code)) {}

    const std::string& code() const { return code_; }

private:
    std::string code_;
};

[[noreturn]] inline void fail(const std::string& code, const std::string& detail) {
    throw CalcError(code, detail);
}

} // namespace germ
