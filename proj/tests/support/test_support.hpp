#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "dsep/models/bilinear.hpp"
#include "dsep/models/dynamic_models.hpp"
#include "dsep/phasor_net.hpp"
#include "dsep/tdsim.hpp"
#include "dsep/window.hpp"

namespace dsep::testing {

inline double rel_err(double got, double want) { return std::abs(got - want) / std::abs(want); }

/// Window whose channel for phase/pair rotate(p, steps) carries the samples of
/// p in `w`. Rotating an LG-A record by one step gives an LG-B record.
inline SampledWindow rotate_channels(const SampledWindow& w, int steps) {
    SampledWindow::ChannelMap out;
    for (const auto& [c, samples] : w.channels()) {
        Channel target = c;
        const int k = static_cast<int>(c);
        if (k < 3) target = phase_voltage(rotate(static_cast<Phase>(k), steps));
        else if (k < 6) target = line_voltage(rotate(static_cast<PhasePair>(k - 3), steps));
        else if (k < 9) target = line_current(rotate(static_cast<Phase>(k - 6), steps));
        out[target] = samples;
    }
    return make_window(w.dt(), std::move(out), w.t0());
}

/// Random point with positive parameters around `param_scale` and internal
/// slots uniform in [-state_scale, state_scale].
inline Eigen::VectorXd random_state(const models::StateLayout& layout, std::mt19937_64& rng, double param_scale,
                                    double state_scale) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Eigen::VectorXd x(layout.size());
    for (const models::SlotGroup& g : layout.groups())
        for (Eigen::Index k = 0; k < g.size; ++k)
            x(g.offset + k) = g.parameter ? param_scale * (1.0 + 0.5 * u(rng)) : state_scale * u(rng);
    return x;
}

/// Independent phasor solution of the simulated network: ideal source behind
/// series source + cable impedance feeding the load/fault admittance Y.
/// Returns terminal voltages and line currents.
struct NetworkPhasors {
    std::array<std::complex<double>, 3> v;
    std::array<std::complex<double>, 3> i;
};

inline NetworkPhasors network_oracle(const CircuitScenario& s, const FaultKind& fault) {
    const double w = s.omega();
    const std::complex<double> zs(s.rs + s.rc, w * (s.ls + s.lc));
    LoadParams load = s.load;
    if (fault.is_fault())
        load.rf = fault.type() == FaultKind::Type::LineGround ? *s.load.rf + s.rg : 2.0 * *s.load.rf;
    const Eigen::Matrix3cd y = assemble_admittance(s.conn, fault, load, w).y;
    const std::array<std::complex<double>, 3> e = balanced_voltages(s.vll_rms);
    Eigen::Matrix3cd a = y;
    Eigen::Vector3cd b;
    for (int k = 0; k < 3; ++k) {
        a(k, k) += 1.0 / zs;
        b(k) = e[static_cast<std::size_t>(k)] / zs;
    }
    const Eigen::Vector3cd u = a.partialPivLu().solve(b);
    NetworkPhasors out;
    for (int k = 0; k < 3; ++k) {
        out.v[static_cast<std::size_t>(k)] = u(k);
        out.i[static_cast<std::size_t>(k)] = (e[static_cast<std::size_t>(k)] - u(k)) / zs;
    }
    return out;
}

inline std::vector<double> sampled(double amplitude, double omega, double phase, double dt, std::size_t n) {
    std::vector<double> s(n);
    for (std::size_t k = 0; k < n; ++k) s[k] = amplitude * std::cos(omega * static_cast<double>(k) * dt + phase);
    return s;
}

/// Worst relative error of the steady-state line currents from t_from onward
/// against network_oracle.
inline double steady_state_error(const CircuitScenario& s, double t_from) {
    const SteadyStatePhasors got = steady_state_phasors(s, t_from);
    const NetworkPhasors want = network_oracle(s, s.fault);
    double worst = 0.0;
    for (std::size_t k = 0; k < 3; ++k)
        worst = std::max(worst, std::abs(got.i[k].complex() - want.i[k]) / std::abs(want.i[k]));
    return worst;
}

/// Largest entry of |analytic - central difference| over the Jacobian,
/// relative to max(1, largest analytic entry).
inline double jacobian_fd_error(const models::BilinearSystem& sys, const Eigen::VectorXd& x) {
    const Eigen::MatrixXd analytic = Eigen::MatrixXd(sys.jacobian(x));
    Eigen::MatrixXd fd(sys.rows(), x.size());
    for (Eigen::Index k = 0; k < x.size(); ++k) {
        const double h = 1e-6 * std::max(1.0, std::abs(x(k)));
        Eigen::VectorXd xp = x;
        Eigen::VectorXd xm = x;
        xp(k) += h;
        xm(k) -= h;
        fd.col(k) = (sys.h(xp) - sys.h(xm)) / (2.0 * h);
    }
    return (analytic - fd).cwiseAbs().maxCoeff() / std::max(1.0, analytic.cwiseAbs().maxCoeff());
}

/// Largest Simpson-row residual of the single-phase RL model over one cycle,
/// with every state set to the exact sinusoidal solution.
inline double simpson_residual(int samples_per_cycle) {
    const double w = kNominalOmega;
    const double r = 19.2;
    const double l = 25.465e-3;
    const double dt = 1.0 / kNominalFrequency / samples_per_cycle;
    const auto n = static_cast<std::size_t>(samples_per_cycle) + 1;
    std::vector<double> v(n);
    std::vector<double> i(n);
    std::vector<double> vl(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double t = static_cast<double>(k) * dt;
        i[k] = 10.0 * std::sin(w * t);
        vl[k] = l * 10.0 * w * std::cos(w * t);
        v[k] = r * i[k] + vl[k];
    }
    const SampledWindow win = make_window(dt, {{"v", v}, {"i", i}});
    const models::ModelId id{models::Family::Dynamic, ConnectionKind::SinglePhase, FaultKind::none(), false};
    const models::ModelProblem mp = models::build_dynamic_problem(id, win);
    const models::StateLayout& lay = mp.system->layout();
    Eigen::VectorXd x = Eigen::VectorXd::Zero(lay.size());
    x(lay.at("G")) = 1.0 / r;
    x(lay.at("Lambda")) = 1.0 / l;
    for (std::size_t k = 0; k < n; ++k) {
        x(lay.at("v_r", static_cast<Eigen::Index>(k))) = r * i[k];
        x(lay.at("v_l", static_cast<Eigen::Index>(k))) = vl[k];
    }
    const models::RowBlock& z = mp.system->block("z");
    return mp.system->h(x).segment(z.begin, z.end - z.begin).cwiseAbs().maxCoeff();
}

}  // namespace dsep::testing
