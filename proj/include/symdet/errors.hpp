#pragma once

#include <stdexcept>
#include <string>

namespace symdet {

enum class ErrorCode {
    UnboundSymbol,
    GammaPole,
    InconsistentSubstitution,
    PatternMismatch,
    OrderTooLarge,
    NonCommutingBase,
    NonPoleSingularity,
    EpsilonLimitDivergent,
    ValidityViolated,
    UnsupportedRank,
    NoRule,
    PoleAtZero,
    SubstitutionMissing,
    VerificationFailed,
    UnknownClaim,
    NonConvergent,
    Domain,
};

inline const char* error_name(ErrorCode c) {
    switch (c) {
        case ErrorCode::UnboundSymbol: return "UnboundSymbol";
        case ErrorCode::GammaPole: return "GammaPole";
        case ErrorCode::InconsistentSubstitution: return "InconsistentSubstitution";
        case ErrorCode::PatternMismatch: return "PatternMismatch";
        case ErrorCode::OrderTooLarge: return "OrderTooLarge";
        case ErrorCode::NonCommutingBase: return "NonCommutingBase";
        case ErrorCode::NonPoleSingularity: return "NonPoleSingularity";
        case ErrorCode::EpsilonLimitDivergent: return "EpsilonLimitDivergent";
        case ErrorCode::ValidityViolated: return "ValidityViolated";
        case ErrorCode::UnsupportedRank: return "UnsupportedRank";
        case ErrorCode::NoRule: return "NoRule";
        case ErrorCode::PoleAtZero: return "PoleAtZero";
        case ErrorCode::SubstitutionMissing: return "SubstitutionMissing";
        case ErrorCode::VerificationFailed: return "VerificationFailed";
        case ErrorCode::UnknownClaim: return "UnknownClaim";
        case ErrorCode::NonConvergent: return "NonConvergent";
        case ErrorCode::Domain: return "Domain";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace symdet
