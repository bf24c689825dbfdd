#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dsep {

enum class ErrorCode {
    LengthMismatch,
    UnknownChannel,
    NonPositiveDt,
    InvalidArgument,
    UnsupportedCombination,
    InvalidScenario,
    SingularSystem,
    StepTooLarge,
    WindowTooShort,
    RankDeficient,
    NonFinite,
    ChannelMismatch,
    AllFitsFailed,
    ParseError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Exception type used throughout the library. The code lets callers
/// (and the CLI exit-code mapping) branch without parsing messages.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace dsep
