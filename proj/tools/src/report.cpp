#include "dsep/cli/report.hpp"

#include <cmath>

namespace dsep::cli {
namespace {

using json = nlohmann::ordered_json;

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

json to_json(const models::Estimates& e) {
    json out{{"r_ohm", e.r}, {"l_mh", e.l * 1e3}, {"x_ohm", e.x}};
    out["rf_mohm"] = e.rf ? finite_or_null(*e.rf * 1e3) : json(nullptr);
    if (e.faulted_phase) out["faulted_phase"] = std::string(to_string(*e.faulted_phase));
    return out;
}

json to_json(const HypothesisFit& fit) {
    json out{{"model", fit.id.name()},
             {"dim_y", fit.dim_y},
             {"dim_x", fit.dim_x},
             {"j", finite_or_null(fit.j)},
             {"j_normalized", finite_or_null(fit.j_normalized)},
             {"iterations", fit.iters},
             {"converged", fit.converged},
             {"significant", fit.significant}};
    if (fit.error.empty()) out["stop_reason"] = std::string(to_string(fit.reason));
    out["estimates"] = fit.estimates ? to_json(*fit.estimates) : json(nullptr);
    if (!fit.error.empty()) out["error"] = fit.error;
    return out;
}

json to_json(const TripDecision& trip) {
    return json{{"trip", trip.trip}, {"fault", to_string(trip.fault)}, {"reason", trip.reason}};
}

json classification_report(const Classification& c, const TripDecision& trip, const SampledWindow* window) {
    json out{{"family", std::string(models::to_string(c.family))}, {"connection", std::string(to_string(c.conn))}};
    if (window != nullptr)
        out["window"] = json{{"t0", window->t0()}, {"dt", window->dt()}, {"samples", window->size()}};
    out["winner"] = c.winner.name();
    out["margin"] = finite_or_null(c.margin);
    out["trip"] = to_json(trip);
    out["warnings"] = c.warnings;
    json ranking = json::array();
    for (std::size_t k = 0; k < c.ranking.size(); ++k) {
        json entry = to_json(c.ranking[k]);
        entry["rank"] = k + 1;
        ranking.push_back(std::move(entry));
    }
    out["ranking"] = std::move(ranking);
    return out;
}

}  // namespace dsep::cli
