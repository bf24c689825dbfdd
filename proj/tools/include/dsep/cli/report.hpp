#pragma once

#include <nlohmann/json.hpp>

#include "dsep/protect.hpp"

namespace dsep::cli {

/// Estimates in report units: r_ohm, l_mh, x_ohm, rf_mohm, faulted_phase.
nlohmann::ordered_json to_json(const models::Estimates& e);
nlohmann::ordered_json to_json(const HypothesisFit& fit);
nlohmann::ordered_json to_json(const TripDecision& trip);

/// Classification report: family, connection, window, winner, margin (null
/// when unbounded), trip, warnings and the ranked hypotheses.
nlohmann::ordered_json classification_report(const Classification& c, const TripDecision& trip, const SampledWindow* window);

}  // namespace dsep::cli
