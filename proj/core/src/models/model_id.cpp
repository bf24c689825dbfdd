#include "dsep/models/model_id.hpp"

namespace dsep::models {

std::string_view to_string(Family f) noexcept { return f == Family::Phasor ? "phasor" : "dynamic"; }

std::optional<Family> parse_family(std::string_view text) noexcept {
    if (text == "phasor") return Family::Phasor;
    if (text == "dynamic") return Family::Dynamic;
    return std::nullopt;
}

std::string ModelId::name() const {
    std::string out = family == Family::Phasor ? "P-" : "";
    switch (conn) {
        case ConnectionKind::SinglePhase: return out + (family == Family::Phasor ? "SP" : "SP-RL");
        case ConnectionKind::GroundedWye: out += "GW-"; break;
        case ConnectionKind::Delta: out += "D-"; break;
    }
    if (unbalanced) return out + "UB";
    switch (fault.type()) {
        case FaultKind::Type::None: return out + "NF";
        case FaultKind::Type::LineGround: return out + "LG-" + std::string(dsep::to_string(fault.phase()));
        case FaultKind::Type::LineLine: return out + "LL-" + std::string(dsep::to_string(fault.pair()));
    }
    return out;
}

int ModelId::rotation() const noexcept {
    switch (fault.type()) {
        case FaultKind::Type::LineGround: return index(fault.phase());
        case FaultKind::Type::LineLine: return index(fault.pair());
        default: return 0;
    }
}

std::optional<ModelId> parse_model_id(std::string_view name) {
    for (const ModelId& id : all_models())
        if (id.name() == name) return id;
    return std::nullopt;
}

std::vector<ModelId> hypothesis_bank(Family family, ConnectionKind conn) {
    std::vector<ModelId> out;
    if (conn == ConnectionKind::SinglePhase) {
        out.push_back({family, conn, FaultKind::none(), false});
        return out;
    }
    if (family == Family::Dynamic) {
        out.push_back({family, conn, FaultKind::none(), false});
        for (Phase p : kPhases) out.push_back({family, conn, FaultKind::line_ground(p), false});
        for (PhasePair p : kPairs) out.push_back({family, conn, FaultKind::line_line(p), false});
        return out;
    }
    if (conn == ConnectionKind::GroundedWye) {
        out.push_back({family, conn, FaultKind::none(), true});
        for (PhasePair p : kPairs) out.push_back({family, conn, FaultKind::line_line(p), false});
    } else {
        for (PhasePair p : kPairs) out.push_back({family, conn, FaultKind::line_line(p), false});
        for (Phase p : kPhases) out.push_back({family, conn, FaultKind::line_ground(p), false});
    }
    return out;
}

std::vector<ModelId> all_models() {
    std::vector<ModelId> out;
    for (Family f : {Family::Phasor, Family::Dynamic})
        for (ConnectionKind c : {ConnectionKind::SinglePhase, ConnectionKind::GroundedWye, ConnectionKind::Delta})
            for (const ModelId& id : hypothesis_bank(f, c)) out.push_back(id);
    return out;
}

}  // namespace dsep::models
