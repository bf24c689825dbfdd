#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dsep/types.hpp"

namespace dsep::models {

enum class Family { Phasor, Dynamic };

std::string_view to_string(Family f) noexcept;
std::optional<Family> parse_family(std::string_view text) noexcept;

/// One hypothesis: family, load connection and fault configuration. The
/// phasor grounded-wye line-ground model fits three independent branch
/// admittances and is phase-agnostic; it is flagged `unbalanced`.
struct ModelId {
    Family family = Family::Dynamic;
    ConnectionKind conn = ConnectionKind::GroundedWye;
    FaultKind fault;
    bool unbalanced = false;

    bool operator==(const ModelId&) const = default;

    /// Dynamic: "SP-RL", "GW-NF", "GW-LG-A", "GW-LL-AB", "D-NF", "D-LL-AB",
    /// "D-LG-A". Phasor: "P-SP", "P-GW-UB", "P-GW-LL-AB", "P-D-LL-AB", "P-D-LG-A".
    std::string name() const;

    /// Variant index 0..2 relative to the phase-A / pair-AB prototype.
    int rotation() const noexcept;
};

std::optional<ModelId> parse_model_id(std::string_view name);

/// The hypothesis bank fitted by the classifier for one connection.
std::vector<ModelId> hypothesis_bank(Family family, ConnectionKind conn);

/// Every model the library can build, phase variants included.
std::vector<ModelId> all_models();

}  // namespace dsep::models
