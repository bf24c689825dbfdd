#pragma once

#include "dsep/phasor.hpp"
#include "dsep/types.hpp"
#include "dsep/window.hpp"

namespace dsep {

/// Ideal three-phase source (grounded neutral) behind source and cable
/// impedance, feeding an RL load at the measured terminals, with a resistive
/// fault that closes at t_fault. Single-phase scenarios drive the load
/// directly from an ideal source of RMS voltage `vll_rms`.
///
/// Fault paths: line-ground is R_f + R_g to ground, line-line is 2 R_f
/// between the two terminals.
struct CircuitScenario {
    ConnectionKind conn = ConnectionKind::GroundedWye;
    FaultKind fault;
    LoadParams load;
    double vll_rms = 480.0;
    double f0 = kNominalFrequency;
    double rs = 0.0;
    double ls = 0.0;
    double rc = 0.0;
    double lc = 0.0;
    double rg = 0.0;
    double t_end = 0.2;
    double t_fault = 0.05;
    double dt_sim = 10e-6;
    double dt_sample = 500e-6;

    /// Throws Error(InvalidScenario) for shape violations and
    /// Error(StepTooLarge) when dt_sim exceeds a twentieth of the period.
    void validate() const;

    double period() const { return 1.0 / f0; }
    double omega() const;
    /// Number of output samples, round(t_end / dt_sample).
    std::size_t sample_count() const;
};

/// Scenario pre-configured from the reference experiments: single-phase
/// (240 V ideal source, 19.2 ohm / 25.465 mH, 10 ms at 100 us), or the
/// three-phase grounded-wye / delta load with source, cable and fault
/// parameters (480 V, 200 ms at 500 us, fault at 50 ms).
CircuitScenario reference_scenario(ConnectionKind conn, const FaultKind& fault = FaultKind::none());

/// Integrates the network with the trapezoidal rule at dt_sim, starting from
/// the pre-fault sinusoidal steady state, and samples terminal voltages and
/// line currents every dt_sample.
///
/// Errors: InvalidScenario, StepTooLarge, SingularSystem.
SampledWindow simulate(const CircuitScenario& s);

struct SteadyStatePhasors {
    PhasorTriple v;  ///< terminal voltages to ground (single-phase: index 0)
    PhasorTriple i;  ///< line currents
};

/// Fundamental phasors of an integer number of cycles taken from t_from
/// onward. Errors: WindowTooShort when fewer than 2 cycles remain.
SteadyStatePhasors steady_state_phasors(const CircuitScenario& s, double t_from);

/// Same extraction applied to an already simulated window.
SteadyStatePhasors steady_state_phasors(const SampledWindow& w, ConnectionKind conn, double f0, double t_from);

}  // namespace dsep
