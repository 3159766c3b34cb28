#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qspec {

enum class ErrorCode {
    NotHermitian,
    NotPositive,
    ConvergenceFailure,
    DomainError,
    DimensionMismatch,
    ZeroVector,
    InvalidBasis,
    BasisMismatch,
    UnknownExample,
    EmptySampleSet,
    GridMismatch,
    NotSimilar,
    NotInPseudospectrum,
    ConfigError,
};

constexpr std::string_view to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::NotPositive: return "NotPositive";
    case ErrorCode::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::InvalidBasis: return "InvalidBasis";
    case ErrorCode::BasisMismatch: return "BasisMismatch";
    case ErrorCode::UnknownExample: return "UnknownExample";
    case ErrorCode::EmptySampleSet: return "EmptySampleSet";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::NotSimilar: return "NotSimilar";
    case ErrorCode::NotInPseudospectrum: return "NotInPseudospectrum";
    case ErrorCode::ConfigError: return "ConfigError";
    }
    return "Unknown";
}

/// Single exception type for the library; the code tells callers what went wrong.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace qspec
