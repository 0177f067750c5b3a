#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rotchaos {

enum class ErrorCode {
    DivisionByZeroInterval,
    Overflow,
    InvalidInterval,
    InvalidParameter,
    TooWide,
    BudgetExhausted,
    PicardFailure,
    IntegrationFailure,
    BoundsExceeded,
    OrbitEscaped,
    NoCandidates,
    InvalidChain,
    SchemaMismatch,
    ConfigError,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

  private:
    ErrorCode code_;
};

} // namespace rotchaos
