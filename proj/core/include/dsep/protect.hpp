#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dsep/gauss_newton.hpp"
#include "dsep/models/bilinear.hpp"
#include "dsep/models/phasor_models.hpp"
#include "dsep/window.hpp"

namespace dsep {

struct HypothesisFit {
    models::ModelId id;
    Eigen::Index dim_y = 0;
    Eigen::Index dim_x = 0;
    double j = std::numeric_limits<double>::infinity();
    double j_normalized = std::numeric_limits<double>::infinity();
    int iters = 0;
    bool converged = false;
    StopReason reason = StopReason::MaxIterations;
    /// False for a fault hypothesis that nests the no-fault model but does not
    /// improve on it significantly (F-test); such fits rank after the others.
    bool significant = true;
    std::optional<models::Estimates> estimates;
    /// Set when building or solving the hypothesis threw.
    std::string error;
    std::vector<double> j_history;
};

struct Classification {
    models::Family family = models::Family::Dynamic;
    ConnectionKind conn = ConnectionKind::GroundedWye;
    /// Converged significant fits by ascending j_normalized, then the rest.
    std::vector<HypothesisFit> ranking;
    models::ModelId winner;
    /// Best competing j over winner j; +inf when there is no competitor or the
    /// winner fits exactly.
    double margin = 1.0;
    std::vector<std::string> warnings;

    const HypothesisFit& best() const { return ranking.front(); }
};

struct ClassifyOptions {
    SolveOptions solve;
    /// Common row bases; derived from the measurements when absent.
    std::optional<models::Bases> bases;
    /// Significance level of the nested-model test.
    double alpha = 1e-4;
    double f0 = kNominalFrequency;
};

/// Fits the dynamic hypothesis bank of `conn` to the window and ranks it by
/// normalized residual. Errors: ChannelMismatch, WindowTooShort, AllFitsFailed.
Classification classify(ConnectionKind conn, const SampledWindow& w, const ClassifyOptions& opts = {});

/// Same for the phasor bank.
Classification classify(const models::PhasorMeasurement& m, const ClassifyOptions& opts = {});

/// Fits one model and reports it in the ranking format.
HypothesisFit fit_hypothesis(const models::ModelProblem& problem, const SolveOptions& opts = {});

struct TripPolicy {
    double margin_min = 1.5;
    bool require_converged = true;
    /// Unbalanced phasor model: the excess branch conductance must exceed this
    /// fraction of the load admittance magnitude to count as a fault.
    double unbalance_min = 0.1;
};

struct TripDecision {
    bool trip = false;
    FaultKind fault;
    std::string reason;
};

TripDecision trip_decision(const Classification& c, const TripPolicy& policy = {});

/// Fault identified by the winner (None for no-fault winners).
FaultKind identified_fault(const Classification& c, const TripPolicy& policy = {});

/// Post-fault analysis window: starts one cycle after t_fault and spans 12
/// cycles, or everything that remains (with a warning). Errors: WindowTooShort.
SampledWindow select_post_fault_window(const SampledWindow& w, double t_fault, double f0 = kNominalFrequency,
                                       std::vector<std::string>* warnings = nullptr);

}  // namespace dsep
