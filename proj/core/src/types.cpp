#include "dsep/types.hpp"

#include <cmath>

#include "dsep/error.hpp"

namespace dsep {

void LoadParams::validate() const {
    if (!(std::isfinite(r) && r > 0.0)) throw Error(ErrorCode::InvalidArgument, "load resistance must be > 0");
    if (!(std::isfinite(l) && l > 0.0)) throw Error(ErrorCode::InvalidArgument, "load inductance must be > 0");
    if (rf && !(std::isfinite(*rf) && *rf > 0.0))
        throw Error(ErrorCode::InvalidArgument, "fault resistance must be > 0");
}

std::string_view to_string(ConnectionKind c) noexcept {
    switch (c) {
        case ConnectionKind::SinglePhase: return "single-phase";
        case ConnectionKind::GroundedWye: return "grounded-wye";
        case ConnectionKind::Delta: return "delta";
    }
    return "?";
}

std::string_view to_string(Phase p) noexcept {
    static constexpr std::array<std::string_view, 3> names{"A", "B", "C"};
    return names[static_cast<std::size_t>(index(p))];
}

std::string_view to_string(PhasePair p) noexcept {
    static constexpr std::array<std::string_view, 3> names{"AB", "BC", "CA"};
    return names[static_cast<std::size_t>(index(p))];
}

std::string to_string(const FaultKind& f) {
    switch (f.type()) {
        case FaultKind::Type::None: return "None";
        case FaultKind::Type::LineGround: return "LG-" + std::string(to_string(f.phase()));
        case FaultKind::Type::LineLine: return "LL-" + std::string(to_string(f.pair()));
    }
    return "?";
}

std::optional<ConnectionKind> parse_connection(std::string_view text) noexcept {
    if (text == "single" || text == "single-phase" || text == "sp") return ConnectionKind::SinglePhase;
    if (text == "gwye" || text == "grounded-wye" || text == "wye") return ConnectionKind::GroundedWye;
    if (text == "delta") return ConnectionKind::Delta;
    return std::nullopt;
}

std::optional<FaultKind> parse_fault(std::string_view text) noexcept {
    if (text == "None" || text == "none" || text == "NF") return FaultKind::none();
    if (text.size() == 4 && (text.substr(0, 3) == "LG-" || text.substr(0, 3) == "lg-")) {
        for (Phase p : kPhases)
            if (text.substr(3) == to_string(p)) return FaultKind::line_ground(p);
    }
    if (text.size() == 5 && (text.substr(0, 3) == "LL-" || text.substr(0, 3) == "ll-")) {
        for (PhasePair p : kPairs)
            if (text.substr(3) == to_string(p)) return FaultKind::line_line(p);
    }
    return std::nullopt;
}

}  // namespace dsep
