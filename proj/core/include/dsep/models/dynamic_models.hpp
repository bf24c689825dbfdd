#pragma once

#include <optional>

#include "dsep/models/bilinear.hpp"
#include "dsep/window.hpp"

namespace dsep::models {

/// Bases from the largest peak over all voltage channels and over all current
/// channels of the window (1 when a group is absent or zero). The same bases
/// are used for every hypothesis fitted to one window.
Bases default_bases(const SampledWindow& w);

/// Sampled dynamic model over the whole window. Parameters are G = 1/R,
/// Lambda = 1/L and, for fault models, G_f; internal states are per-sample
/// resistor and inductor voltages of every branch (and the fault voltage for
/// the delta line-ground model). Resistor and inductor currents are tied
/// together by zero-valued Simpson rows
///   G (v_r(n) - v_r(n-2)) - (dt Lambda / 3) (v_l(n) + 4 v_l(n-1) + v_l(n-2)).
///
/// Delta models that keep all three inductive branches carry two extra
/// zero-valued rows fixing the sum of the branch resistor voltages at the
/// first and last samples; without them the circulating delta current is
/// unobservable.
///
/// The start point x0 seeds parameters from a fundamental-phasor pre-fit of
/// the window and then solves the (linear) state subproblem exactly.
///
/// Errors: ChannelMismatch (missing channel, wrong family), WindowTooShort
/// (fewer than 5 samples).
ModelProblem build_dynamic_problem(const ModelId& id, const SampledWindow& w,
                                   const std::optional<Bases>& bases = std::nullopt,
                                   double f0 = kNominalFrequency);

/// The documented start point of build_dynamic_problem.
Eigen::VectorXd initialize_state(const ModelId& id, const SampledWindow& w, double f0 = kNominalFrequency);

}  // namespace dsep::models
