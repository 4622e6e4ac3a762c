#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace srsa {

enum class ErrorCode {
    InvalidArgument,
    DegenerateBloch,
    StepSizeUnderflow,
    NonFiniteState,
    NoRootInBracket,
    DivergentLog,
    GridTooCoarse,
    GridAliasing,
    EmptySeries,
    EmptyDistribution,
    ParseError,
    ValidationError,
    IoError,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code), detail_(what) {}

    ErrorCode code() const noexcept { return code_; }
    // Message without the code prefix.
    const std::string& detail() const noexcept { return detail_; }

private:
    ErrorCode code_;
    std::string detail_;
};

inline std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DegenerateBloch: return "DegenerateBloch";
    case ErrorCode::StepSizeUnderflow: return "StepSizeUnderflow";
    case ErrorCode::NonFiniteState: return "NonFiniteState";
    case ErrorCode::NoRootInBracket: return "NoRootInBracket";
    case ErrorCode::DivergentLog: return "DivergentLog";
    case ErrorCode::GridTooCoarse: return "GridTooCoarse";
    case ErrorCode::GridAliasing: return "GridAliasing";
    case ErrorCode::EmptySeries: return "EmptySeries";
    case ErrorCode::EmptyDistribution: return "EmptyDistribution";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

} // namespace srsa
