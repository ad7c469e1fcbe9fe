#pragma once

#include <stdexcept>
#include <string>

namespace henon {

/// Invalid parameters or inputs outside an operation's domain. The CLI maps
/// these to exit status 2.
class DomainError : public std::invalid_argument {
public:
    explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

/// A numerical procedure could not deliver a result (no bracket, integrator
/// underflow, non-convergence). The CLI maps these to exit status 3.
class NumericError : public std::runtime_error {
public:
    enum class Code {
        NoBracket,
        IntegratorFailure,
        TailTooShort,
        NonConvergence,
        Precision,
        Unresolved,
    };

    NumericError(Code code, const std::string& what) : std::runtime_error(what), code_(code) {}

    Code code() const noexcept { return code_; }

private:
    Code code_;
};

}  // namespace henon
