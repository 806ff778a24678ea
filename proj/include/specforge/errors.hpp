#pragma once

#include <stdexcept>
#include <string>

namespace specforge {

enum class ErrorCode {
    // Codes 2-6 double as CLI exit codes.
    ZeroNotIncluded = 2,
    MalformedSet = 3,
    Usage = 4,
    CountMismatch = 5,
    VerifyFailed = 6,
    // Library-level failures; the CLI maps them to exit 1.
    TargetOutOfRange = 10,
    BracketFailure = 11,
    EmptyInput = 12,
    NonConvergence = 13,
    CouplingTooStrong = 14,
    SingularRmu = 15,
    IndexOutOfRange = 16,
    InvalidProblem = 17,
    Internal = 18,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const { return code_; }

    int exit_code() const {
        int c = static_cast<int>(code_);
        return c <= 6 ? c : 1;
    }

private:
    ErrorCode code_;
};

} // namespace specforge
