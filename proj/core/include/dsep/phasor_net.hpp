#pragma once

#include <Eigen/Core>

#include "dsep/phasor.hpp"
#include "dsep/types.hpp"

namespace dsep {

/// Terminal-current-from-terminal-voltage matrix of a lumped load/fault
/// network, siemens, indexed A, B, C. Single-phase networks use entry (0, 0)
/// only.
struct AdmittanceMatrix3 {
    Eigen::Matrix3cd y = Eigen::Matrix3cd::Zero();

    std::array<Complex, 3> apply(const std::array<Complex, 3>& v) const;
};

/// Builds Y for one load/fault hypothesis. Branch admittance is
/// 1 / (R + j w L), fault admittance 1 / R_f (real).
///
/// - grounded-wye LG: fault conductance in parallel with the faulted branch
/// - grounded-wye LL: fault conductance across the two terminals, all three
///   branches intact
/// - delta LL: the faulted branch is the fault conductance alone
/// - delta LG: fault conductance from the terminal to ground
///
/// Errors: UnsupportedCombination (single-phase with a fault), InvalidArgument
/// (bad parameters, missing R_f for a fault, w <= 0).
AdmittanceMatrix3 assemble_admittance(ConnectionKind conn, const FaultKind& fault, const LoadParams& params,
                                      double omega = kNominalOmega);

/// Positive-sequence set, phase A at 0 deg, B at -120 deg, C at +120 deg, with
/// the given line-line RMS magnitude.
std::array<Complex, 3> balanced_voltages(double vll_rms);

struct PhasorSnapshot {
    PhasorTriple voltages;
    PhasorTriple currents;
};

/// Terminal voltages and currents of the hypothesis network under a balanced
/// source, I = Y V. For single-phase networks `source_v` is the RMS supply
/// voltage and only index 0 is populated.
PhasorSnapshot synthesize_phasor_measurements(ConnectionKind conn, const FaultKind& fault,
                                              const LoadParams& params, double source_v,
                                              double omega = kNominalOmega);

}  // namespace dsep
