#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lvg {

enum class ErrorCode {
    NonPositiveVariance,
    DegenerateInterval,
    SingularPoint,
    NumericalOverflow,
    InvalidLocalVariance,
    SingularSystem,
    OutOfDomain,
    InvalidParams,
    InvalidStrategy,
    DenominatorNearZero,
    InvalidCount,
    PriceOutOfBounds,
    ArbitrageViolation,
    NonFiniteResidual,
    InvalidQuotes,
    ParseError,
    MissingMetadata,
};

constexpr std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::NonPositiveVariance: return "NonPositiveVariance";
    case ErrorCode::DegenerateInterval: return "DegenerateInterval";
    case ErrorCode::SingularPoint: return "SingularPoint";
    case ErrorCode::NumericalOverflow: return "NumericalOverflow";
    case ErrorCode::InvalidLocalVariance: return "InvalidLocalVariance";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::OutOfDomain: return "OutOfDomain";
    case ErrorCode::InvalidParams: return "InvalidParams";
    case ErrorCode::InvalidStrategy: return "InvalidStrategy";
    case ErrorCode::DenominatorNearZero: return "DenominatorNearZero";
    case ErrorCode::InvalidCount: return "InvalidCount";
    case ErrorCode::PriceOutOfBounds: return "PriceOutOfBounds";
    case ErrorCode::ArbitrageViolation: return "ArbitrageViolation";
    case ErrorCode::NonFiniteResidual: return "NonFiniteResidual";
    case ErrorCode::InvalidQuotes: return "InvalidQuotes";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::MissingMetadata: return "MissingMetadata";
    }
    return "Unknown";
}

/// Single exception type for the library; the code identifies the failure class.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace lvg
