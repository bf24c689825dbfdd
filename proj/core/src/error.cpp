#include "dsep/error.hpp"

namespace dsep {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::LengthMismatch: return "LengthMismatch";
        case ErrorCode::UnknownChannel: return "UnknownChannel";
        case ErrorCode::NonPositiveDt: return "NonPositiveDt";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::UnsupportedCombination: return "UnsupportedCombination";
        case ErrorCode::InvalidScenario: return "InvalidScenario";
        case ErrorCode::SingularSystem: return "SingularSystem";
        case ErrorCode::StepTooLarge: return "StepTooLarge";
        case ErrorCode::WindowTooShort: return "WindowTooShort";
        case ErrorCode::RankDeficient: return "RankDeficient";
        case ErrorCode::NonFinite: return "NonFinite";
        case ErrorCode::ChannelMismatch: return "ChannelMismatch";
        case ErrorCode::AllFitsFailed: return "AllFitsFailed";
        case ErrorCode::ParseError: return "ParseError";
    }
    return "Unknown";
}

}  // namespace dsep
