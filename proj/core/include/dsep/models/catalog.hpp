#pragma once

#include <string>
#include <vector>

#include "dsep/models/model_id.hpp"

namespace dsep::models {

/// Count of the form a * N + b, N = number of samples (a = 0 for phasor models).
struct Affine {
    long a = 0;
    long b = 0;

    long at(long n) const noexcept { return a * n + b; }
    std::string formula() const;
};

struct CatalogEntry {
    ModelId id;
    Affine dim_y;
    Affine dim_x;
    std::string description;

    double redundancy(long n) const;
    /// True when the redundancy at N samples is below the 1.6 target.
    bool warning(long n) const;
};

CatalogEntry catalog_entry(const ModelId& id);

/// One entry per model in all_models() order.
std::vector<CatalogEntry> catalog();

}  // namespace dsep::models
