#include "dsep/models/catalog.hpp"

#include "dsep/gauss_newton.hpp"

namespace dsep::models {

std::string Affine::formula() const {
    if (a == 0) return std::to_string(b);
    std::string s = (a == 1 ? std::string() : std::to_string(a)) + "N";
    if (b > 0) s += "+" + std::to_string(b);
    if (b < 0) s += std::to_string(b);
    return s;
}

double CatalogEntry::redundancy(long n) const { return check_redundancy(dim_y.at(n), dim_x.at(n)); }

bool CatalogEntry::warning(long n) const { return redundancy(n) < kRedundancyTarget; }

CatalogEntry catalog_entry(const ModelId& id) {
    CatalogEntry e{id, {}, {}, {}};
    const auto type = id.fault.type();
    if (id.family == Family::Phasor) {
        if (id.conn == ConnectionKind::SinglePhase) {
            e.dim_y = {0, 4};
            e.dim_x = {0, 4};
            e.description = "series impedance Z from one voltage and current phasor";
        } else if (id.unbalanced) {
            e.dim_y = {0, 12};
            e.dim_x = {0, 12};
            e.description = "grounded-wye load as three independent branch admittances";
        } else {
            e.dim_y = {0, 12};
            e.dim_x = {0, 10};
            e.description = id.conn == ConnectionKind::Delta
                                ? (type == FaultKind::Type::LineLine ? "delta load, faulted branch replaced by Y_f"
                                                                     : "delta load with Y_f from a terminal to ground")
                                : "grounded-wye load with Y_f between two terminals";
        }
        return e;
    }
    switch (id.conn) {
        case ConnectionKind::SinglePhase:
            e.dim_y = {3, -2};
            e.dim_x = {2, 2};
            e.description = "series RL branch";
            break;
        case ConnectionKind::GroundedWye:
            if (type == FaultKind::Type::None) {
                e.dim_y = {9, -6};
                e.dim_x = {6, 2};
                e.description = "balanced grounded-wye RL load";
            } else if (type == FaultKind::Type::LineGround) {
                e.dim_y = {8, -4};
                e.dim_x = {5, 3};
                e.description = "grounded-wye load, faulted branch reduced to G_f";
            } else {
                e.dim_y = {9, -6};
                e.dim_x = {6, 3};
                e.description = "grounded-wye load with G_f between two terminals";
            }
            break;
        case ConnectionKind::Delta:
            if (type == FaultKind::Type::None) {
                e.dim_y = {9, -4};
                e.dim_x = {6, 2};
                e.description = "balanced delta RL load (2 gauge rows)";
            } else if (type == FaultKind::Type::LineLine) {
                e.dim_y = {8, -4};
                e.dim_x = {5, 3};
                e.description = "delta load, faulted branch reduced to G_f";
            } else {
                e.dim_y = {10, -4};
                e.dim_x = {7, 3};
                e.description = "delta load with G_f from a terminal to ground (2 gauge rows)";
            }
            break;
    }
    return e;
}

std::vector<CatalogEntry> catalog() {
    std::vector<CatalogEntry> out;
    for (const ModelId& id : all_models()) out.push_back(catalog_entry(id));
    return out;
}

}  // namespace dsep::models
