#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bispec {

// Stable machine-readable failure codes. The CLI prints code_name() verbatim,
// so entries must never be renamed.
enum class ErrorCode {
    InvalidArgument,
    ReducibleMinimalPolynomial,
    UnsupportedFieldSplit,
    ZeroArgument,
    NotRational,
    PrecisionUnderflow,
    ZeroOperator,
    NotNormalized,
    CoefficientNotVanishing,
    UnsupportedCoefficient,
    NonMonicDivisor,
    NonUnitLeadingCoefficient,
    DepthExhausted,
    IntegrationObstruction,
    ResonantBeta,
    NotInKernel,
    MonodromyNotClosed,
    ZeroWronskian,
    LogResidue,
    NotARightFactor,
    NotAPerfectPower,
    ResonanceBelowMinimal,
    NonzeroRemainder,
    InvarianceLost,
    ReconstructionFailed,
    NotFound,
    TailNotVanishing,
    ResidualNonzero,
    NoStringNumber,
    IdentityFailed,
    StepLimitExceeded,
    NonzeroStringNumberAtTermination,
    SyntaxError,
    UnknownSymbol,
    InvariantViolated,
};

inline std::string_view code_name(ErrorCode c)
{
    switch (c) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ReducibleMinimalPolynomial: return "ReducibleMinimalPolynomial";
    case ErrorCode::UnsupportedFieldSplit: return "UnsupportedFieldSplit";
    case ErrorCode::ZeroArgument: return "ZeroArgument";
    case ErrorCode::NotRational: return "NotRational";
    case ErrorCode::PrecisionUnderflow: return "PrecisionUnderflow";
    case ErrorCode::ZeroOperator: return "ZeroOperator";
    case ErrorCode::NotNormalized: return "NotNormalized";
    case ErrorCode::CoefficientNotVanishing: return "CoefficientNotVanishing";
    case ErrorCode::UnsupportedCoefficient: return "UnsupportedCoefficient";
    case ErrorCode::NonMonicDivisor: return "NonMonicDivisor";
    case ErrorCode::NonUnitLeadingCoefficient: return "NonUnitLeadingCoefficient";
    case ErrorCode::DepthExhausted: return "DepthExhausted";
    case ErrorCode::IntegrationObstruction: return "IntegrationObstruction";
    case ErrorCode::ResonantBeta: return "ResonantBeta";
    case ErrorCode::NotInKernel: return "NotInKernel";
    case ErrorCode::MonodromyNotClosed: return "MonodromyNotClosed";
    case ErrorCode::ZeroWronskian: return "ZeroWronskian";
    case ErrorCode::LogResidue: return "LogResidue";
    case ErrorCode::NotARightFactor: return "NotARightFactor";
    case ErrorCode::NotAPerfectPower: return "NotAPerfectPower";
    case ErrorCode::ResonanceBelowMinimal: return "ResonanceBelowMinimal";
    case ErrorCode::NonzeroRemainder: return "NonzeroRemainder";
    case ErrorCode::InvarianceLost: return "InvarianceLost";
    case ErrorCode::ReconstructionFailed: return "ReconstructionFailed";
    case ErrorCode::NotFound: return "NotFound";
    case ErrorCode::TailNotVanishing: return "TailNotVanishing";
    case ErrorCode::ResidualNonzero: return "ResidualNonzero";
    case ErrorCode::NoStringNumber: return "NoStringNumber";
    case ErrorCode::IdentityFailed: return "IdentityFailed";
    case ErrorCode::StepLimitExceeded: return "StepLimitExceeded";
    case ErrorCode::NonzeroStringNumberAtTermination: return "NonzeroStringNumberAtTermination";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::UnknownSymbol: return "UnknownSymbol";
    case ErrorCode::InvariantViolated: return "InvariantViolated";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string &what)
        : std::runtime_error(std::string(code_name(code)) + ": " + what), code_(code)
    {
    }

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string &what)
{
    throw Error(code, what);
}

} // namespace bispec
