#include "rotchaos/error.hpp"

namespace rotchaos {

std::string_view to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::DivisionByZeroInterval: return "DivisionByZeroInterval";
    case ErrorCode::Overflow: return "Overflow";
    case ErrorCode::InvalidInterval: return "InvalidInterval";
    case ErrorCode::InvalidParameter: return "InvalidParameter";
    case ErrorCode::TooWide: return "TooWide";
    case ErrorCode::BudgetExhausted: return "BudgetExhausted";
    case ErrorCode::PicardFailure: return "PicardFailure";
    case ErrorCode::IntegrationFailure: return "IntegrationFailure";
    case ErrorCode::BoundsExceeded: return "BoundsExceeded";
    case ErrorCode::OrbitEscaped: return "OrbitEscaped";
    case ErrorCode::NoCandidates: return "NoCandidates";
    case ErrorCode::InvalidChain: return "InvalidChain";
    case ErrorCode::SchemaMismatch: return "SchemaMismatch";
    case ErrorCode::ConfigError: return "ConfigError";
    }
    return "Unknown";
}

} // namespace rotchaos
