#include "specforge/errors.hpp"

namespace specforge {

const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::ZeroNotIncluded: return "ZeroNotIncluded";
        case ErrorCode::MalformedSet: return "MalformedSet";
        case ErrorCode::Usage: return "Usage";
        case ErrorCode::CountMismatch: return "CountMismatch";
        case ErrorCode::VerifyFailed: return "VerifyFailed";
        case ErrorCode::TargetOutOfRange: return "TargetOutOfRange";
        case ErrorCode::BracketFailure: return "BracketFailure";
        case ErrorCode::EmptyInput: return "EmptyInput";
        case ErrorCode::NonConvergence: return "NonConvergence";
        case ErrorCode::CouplingTooStrong: return "CouplingTooStrong";
        case ErrorCode::SingularRmu: return "SingularRmu";
        case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
        case ErrorCode::InvalidProblem: return "InvalidProblem";
        case ErrorCode::Internal: return "Internal";
    }
    return "Unknown";
}

} // namespace specforge
