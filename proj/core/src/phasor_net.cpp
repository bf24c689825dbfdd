#include "dsep/phasor_net.hpp"

#include <cmath>

#include "dsep/error.hpp"

namespace dsep {

std::array<Complex, 3> AdmittanceMatrix3::apply(const std::array<Complex, 3>& v) const {
    const Eigen::Vector3cd vv(v[0], v[1], v[2]);
    const Eigen::Vector3cd i = y * vv;
    return {i(0), i(1), i(2)};
}

namespace {

void stamp_between(Eigen::Matrix3cd& y, int p, int q, Complex g) {
    y(p, p) += g;
    y(q, q) += g;
    y(p, q) -= g;
    y(q, p) -= g;
}

}  // namespace

AdmittanceMatrix3 assemble_admittance(ConnectionKind conn, const FaultKind& fault, const LoadParams& params,
                                      double omega) {
    params.validate();
    if (!(std::isfinite(omega) && omega > 0.0)) throw Error(ErrorCode::InvalidArgument, "omega must be > 0");
    if (fault.is_fault() && !params.rf)
        throw Error(ErrorCode::InvalidArgument, "fault hypothesis needs a fault resistance");

    const Complex y_branch = 1.0 / Complex(params.r, omega * params.l);
    const Complex y_fault = fault.is_fault() ? Complex(1.0 / *params.rf, 0.0) : Complex(0.0);

    AdmittanceMatrix3 out;
    switch (conn) {
        case ConnectionKind::SinglePhase:
            if (fault.is_fault())
                throw Error(ErrorCode::UnsupportedCombination, "single-phase networks have no fault hypotheses");
            out.y(0, 0) = y_branch;
            return out;

        case ConnectionKind::GroundedWye:
            for (int p = 0; p < 3; ++p) out.y(p, p) = y_branch;
            if (fault.type() == FaultKind::Type::LineGround) {
                out.y(index(fault.phase()), index(fault.phase())) += y_fault;
            } else if (fault.type() == FaultKind::Type::LineLine) {
                const auto [p, q] = terminals(fault.pair());
                stamp_between(out.y, index(p), index(q), y_fault);
            }
            return out;

        case ConnectionKind::Delta:
            for (PhasePair pair : kPairs) {
                const auto [p, q] = terminals(pair);
                const bool faulted = fault.type() == FaultKind::Type::LineLine && fault.pair() == pair;
                stamp_between(out.y, index(p), index(q), faulted ? y_fault : y_branch);
            }
            if (fault.type() == FaultKind::Type::LineGround)
                out.y(index(fault.phase()), index(fault.phase())) += y_fault;
            return out;
    }
    throw Error(ErrorCode::UnsupportedCombination, "unknown connection");
}

std::array<Complex, 3> balanced_voltages(double vll_rms) {
    const double vln = vll_rms / std::sqrt(3.0);
    const double shift = 2.0 * std::numbers::pi / 3.0;
    return {std::polar(vln, 0.0), std::polar(vln, -shift), std::polar(vln, shift)};
}

PhasorSnapshot synthesize_phasor_measurements(ConnectionKind conn, const FaultKind& fault,
                                              const LoadParams& params, double source_v, double omega) {
    const AdmittanceMatrix3 y = assemble_admittance(conn, fault, params, omega);
    std::array<Complex, 3> v{};
    if (conn == ConnectionKind::SinglePhase)
        v[0] = Complex(source_v, 0.0);
    else
        v = balanced_voltages(source_v);
    return {to_phasors(v), to_phasors(y.apply(v))};
}

}  // namespace dsep
