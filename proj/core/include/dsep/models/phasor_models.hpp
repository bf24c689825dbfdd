#pragma once

#include <array>
#include <cstdint>
#include <optional>

#include "dsep/models/bilinear.hpp"
#include "dsep/phasor_net.hpp"
#include "dsep/window.hpp"

namespace dsep::models {

/// Terminal voltages to ground and line currents of one fundamental period.
/// Single-phase measurements use index 0 only.
struct PhasorMeasurement {
    ConnectionKind conn = ConnectionKind::GroundedWye;
    std::array<Complex, 3> v{};
    std::array<Complex, 3> i{};
};

PhasorMeasurement to_measurement(ConnectionKind conn, const PhasorSnapshot& snapshot);

/// Bases from the largest voltage and current magnitudes (1 when all are zero).
Bases default_bases(const PhasorMeasurement& m);

/// Real-split phasor problem: each complex output and state occupies an
/// adjacent (re, im) pair. Parameter slots are complex admittances (or the
/// impedance Z for the single-phase model); states are terminal voltages V_z
/// (or the branch current I_z).
///
/// Errors: ChannelMismatch (family or connection disagree with `m`),
/// NonFinite.
ModelProblem build_phasor_problem(const ModelId& id, const PhasorMeasurement& m,
                                  const std::optional<Bases>& bases = std::nullopt);

/// Sinusoidal waveforms of the phasors (RMS, cosine reference) over
/// `cycles` fundamental periods sampled at `dt`, starting at t = 0.
SampledWindow phasor_waveforms(const PhasorMeasurement& m, int cycles, double dt, double f0 = kNominalFrequency);

/// Fundamental phasors over the whole cycles of the window.
/// Errors: ChannelMismatch, WindowTooShort (fewer than 2 cycles).
PhasorMeasurement measure_phasors(ConnectionKind conn, const SampledWindow& w, double f0 = kNominalFrequency);

/// Re-expresses steady-state phasors as noisy sampled waveforms (`cycles`
/// fundamental periods at `dt`), then re-extracts the fundamental. Noise law
/// as in inject_noise.
PhasorMeasurement noisy_measurement(const PhasorMeasurement& m, double fraction, std::uint64_t seed,
                                    int cycles = 12, double dt = 500e-6, double f0 = kNominalFrequency);

}  // namespace dsep::models
