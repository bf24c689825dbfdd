#pragma once

#include <array>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>

namespace dsep {

inline constexpr double kNominalFrequency = 60.0;
inline constexpr double kNominalOmega = 2.0 * std::numbers::pi * kNominalFrequency;

enum class ConnectionKind { SinglePhase, GroundedWye, Delta };

enum class Phase { A = 0, B = 1, C = 2 };

/// Ordered terminal pair of a line-line fault or a delta branch.
enum class PhasePair { AB = 0, BC = 1, CA = 2 };

inline constexpr std::array<Phase, 3> kPhases{Phase::A, Phase::B, Phase::C};
inline constexpr std::array<PhasePair, 3> kPairs{PhasePair::AB, PhasePair::BC, PhasePair::CA};

constexpr int index(Phase p) noexcept { return static_cast<int>(p); }
constexpr int index(PhasePair p) noexcept { return static_cast<int>(p); }

/// Rotates a phase by `steps` positions in A -> B -> C order.
constexpr Phase rotate(Phase p, int steps) noexcept {
    return static_cast<Phase>(((index(p) + steps) % 3 + 3) % 3);
}
constexpr PhasePair rotate(PhasePair p, int steps) noexcept {
    return static_cast<PhasePair>(((index(p) + steps) % 3 + 3) % 3);
}

/// Terminals (from, to) of a pair: AB -> (A, B), BC -> (B, C), CA -> (C, A).
constexpr std::array<Phase, 2> terminals(PhasePair p) noexcept {
    return {static_cast<Phase>(index(p)), static_cast<Phase>((index(p) + 1) % 3)};
}

class FaultKind {
public:
    enum class Type { None, LineGround, LineLine };

    constexpr FaultKind() = default;

    static constexpr FaultKind none() { return {}; }
    static constexpr FaultKind line_ground(Phase p) { return FaultKind(Type::LineGround, index(p)); }
    static constexpr FaultKind line_line(PhasePair p) { return FaultKind(Type::LineLine, index(p)); }

    constexpr Type type() const noexcept { return type_; }
    constexpr bool is_fault() const noexcept { return type_ != Type::None; }
    /// Only meaningful for LineGround.
    constexpr Phase phase() const noexcept { return static_cast<Phase>(slot_); }
    /// Only meaningful for LineLine.
    constexpr PhasePair pair() const noexcept { return static_cast<PhasePair>(slot_); }

    constexpr bool operator==(const FaultKind&) const = default;

private:
    constexpr FaultKind(Type t, int slot) : type_(t), slot_(slot) {}

    Type type_ = Type::None;
    int slot_ = 0;
};

/// Series RL load branch and the optional fault resistance, SI units.
struct LoadParams {
    double r = 0.0;
    double l = 0.0;
    std::optional<double> rf;

    /// Throws Error(InvalidArgument) unless r > 0, l > 0 and rf > 0 when present.
    void validate() const;
};

std::string_view to_string(ConnectionKind c) noexcept;
std::string_view to_string(Phase p) noexcept;
std::string_view to_string(PhasePair p) noexcept;
/// "None", "LG-A", "LL-AB", ...
std::string to_string(const FaultKind& f);

/// Accepts "single"/"single-phase", "gwye"/"grounded-wye", "delta".
std::optional<ConnectionKind> parse_connection(std::string_view text) noexcept;
std::optional<FaultKind> parse_fault(std::string_view text) noexcept;

}  // namespace dsep
