#include "dsep/tdsim.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <optional>
#include <vector>

#include "dsep/error.hpp"

namespace dsep {

namespace {

// Node numbering: 0..2 load terminals, 3..5 source terminals, -1 ground.
constexpr int kGround = -1;
constexpr int kSource = 3;

struct Branch {
    int from = kGround;
    int to = kGround;
    double r = 0.0;
    double l = 0.0;
    bool switched = false;  // closes at t_fault
    // Trapezoidal companion i_next = b * v_next + history.
    double a = 0.0;
    double b = 0.0;
    double i = 0.0;
    double v = 0.0;

    void prepare(double h) {
        const double k = 2.0 * l / h;
        b = 1.0 / (k + r);
        a = (k - r) / (k + r);
    }
    double history() const { return l > 0.0 ? a * i + b * v : 0.0; }
};

struct Network {
    std::vector<Branch> branches;
    std::array<int, 3> line{-1, -1, -1};  // branch index of each line, -1 if ideal
    std::array<int, 3> terminal{0, 1, 2};  // node carrying each load terminal
    int unknowns = 3;
};

bool ideal_line(const CircuitScenario& s) { return s.rs + s.rc == 0.0 && s.ls + s.lc == 0.0; }

Network build_network(const CircuitScenario& s) {
    Network net;
    if (s.conn == ConnectionKind::SinglePhase) {
        net.terminal = {kSource, kGround, kGround};
        net.unknowns = 0;
        net.branches.push_back({kSource, kGround, s.load.r, s.load.l});
        return net;
    }
    if (ideal_line(s)) {
        net.terminal = {kSource, kSource + 1, kSource + 2};
        net.unknowns = 0;
    } else {
        for (int p = 0; p < 3; ++p) {
            net.line[static_cast<std::size_t>(p)] = static_cast<int>(net.branches.size());
            net.branches.push_back({kSource + p, p, s.rs + s.rc, s.ls + s.lc});
        }
    }
    const auto node = [&](Phase p) { return net.terminal[static_cast<std::size_t>(index(p))]; };
    if (s.conn == ConnectionKind::GroundedWye) {
        for (Phase p : kPhases) net.branches.push_back({node(p), kGround, s.load.r, s.load.l});
    } else {
        for (PhasePair pair : kPairs) {
            const auto [p, q] = terminals(pair);
            net.branches.push_back({node(p), node(q), s.load.r, s.load.l});
        }
    }
    if (s.fault.type() == FaultKind::Type::LineGround) {
        net.branches.push_back({node(s.fault.phase()), kGround, *s.load.rf + s.rg, 0.0, true});
    } else if (s.fault.type() == FaultKind::Type::LineLine) {
        const auto [p, q] = terminals(s.fault.pair());
        net.branches.push_back({node(p), node(q), 2.0 * *s.load.rf, 0.0, true});
    }
    return net;
}

double node_voltage(int node, const Eigen::Vector3d& u, const std::array<double, 3>& e) {
    if (node == kGround) return 0.0;
    if (node >= kSource) return e[static_cast<std::size_t>(node - kSource)];
    return u(node);
}

std::array<double, 3> source_voltages(const CircuitScenario& s, double t) {
    const double w = s.omega();
    if (s.conn == ConnectionKind::SinglePhase)
        return {std::numbers::sqrt2 * s.vll_rms * std::cos(w * t), 0.0, 0.0};
    const double peak = std::numbers::sqrt2 * s.vll_rms / std::sqrt(3.0);
    const double shift = 2.0 * std::numbers::pi / 3.0;
    return {peak * std::cos(w * t), peak * std::cos(w * t - shift), peak * std::cos(w * t + shift)};
}

// Phasor solution of the pre-fault network; gives a consistent initial state.
void initialize_steady_state(Network& net, const CircuitScenario& s) {
    const double w = s.omega();
    std::array<Complex, 3> e{};
    if (s.conn == ConnectionKind::SinglePhase) {
        e[0] = Complex(s.vll_rms, 0.0);
    } else {
        const double vln = s.vll_rms / std::sqrt(3.0);
        const double shift = 2.0 * std::numbers::pi / 3.0;
        e = {std::polar(vln, 0.0), std::polar(vln, -shift), std::polar(vln, shift)};
    }
    Eigen::Matrix3cd y = Eigen::Matrix3cd::Zero();
    Eigen::Vector3cd rhs = Eigen::Vector3cd::Zero();
    const auto phasor_at = [&](int node, const Eigen::Vector3cd& u) -> Complex {
        if (node == kGround) return 0.0;
        if (node >= kSource) return e[static_cast<std::size_t>(node - kSource)];
        return u(node);
    };
    for (const Branch& br : net.branches) {
        if (br.switched) continue;
        const Complex g = 1.0 / Complex(br.r, w * br.l);
        for (int side = 0; side < 2; ++side) {
            const int here = side == 0 ? br.from : br.to;
            const int there = side == 0 ? br.to : br.from;
            if (here < 0 || here >= kSource) continue;
            y(here, here) += g;
            if (there >= 0 && there < kSource)
                y(here, there) -= g;
            else if (there >= kSource)
                rhs(here) += g * e[static_cast<std::size_t>(there - kSource)];
        }
    }
    Eigen::Vector3cd u = Eigen::Vector3cd::Zero();
    if (net.unknowns > 0) {
        Eigen::FullPivLU<Eigen::Matrix3cd> lu(y);
        if (!lu.isInvertible()) throw Error(ErrorCode::SingularSystem, "pre-fault network is singular");
        u = lu.solve(rhs);
    }
    for (Branch& br : net.branches) {
        if (br.switched) continue;
        const Complex v = phasor_at(br.from, u) - phasor_at(br.to, u);
        const Complex i = v / Complex(br.r, w * br.l);
        // value at t = 0 of sqrt(2) Re{X e^{jwt}}
        br.v = std::numbers::sqrt2 * v.real();
        br.i = std::numbers::sqrt2 * i.real();
    }
}

class NodalSolver {
public:
    NodalSolver(const Network& net, bool fault_closed) : net_(net), fault_closed_(fault_closed) {
        if (net.unknowns == 0) return;
        Eigen::Matrix3d m = Eigen::Matrix3d::Zero();
        for (const Branch& br : net.branches) {
            if (!active(br)) continue;
            for (int side = 0; side < 2; ++side) {
                const int here = side == 0 ? br.from : br.to;
                const int there = side == 0 ? br.to : br.from;
                if (here < 0 || here >= kSource) continue;
                m(here, here) += br.b;
                if (there >= 0 && there < kSource) m(here, there) -= br.b;
            }
        }
        lu_.compute(m);
        if (!lu_.isInvertible()) throw Error(ErrorCode::SingularSystem, "nodal matrix is singular");
    }

    bool active(const Branch& br) const { return !br.switched || fault_closed_; }

    Eigen::Vector3d solve(const std::array<double, 3>& e) const {
        if (net_.unknowns == 0) return Eigen::Vector3d::Zero();
        Eigen::Vector3d rhs = Eigen::Vector3d::Zero();
        for (const Branch& br : net_.branches) {
            if (!active(br)) continue;
            const double hist = br.history();
            // current b * (v_from - v_to) + hist leaves `from` and enters `to`
            if (br.from >= 0 && br.from < kSource) {
                rhs(br.from) -= hist;
                if (br.to >= kSource) rhs(br.from) += br.b * e[static_cast<std::size_t>(br.to - kSource)];
            }
            if (br.to >= 0 && br.to < kSource) {
                rhs(br.to) += hist;
                if (br.from >= kSource) rhs(br.to) += br.b * e[static_cast<std::size_t>(br.from - kSource)];
            }
        }
        return lu_.solve(rhs);
    }

private:
    const Network& net_;
    bool fault_closed_;
    Eigen::FullPivLU<Eigen::Matrix3d> lu_;
};

}  // namespace

double CircuitScenario::omega() const { return 2.0 * std::numbers::pi * f0; }

std::size_t CircuitScenario::sample_count() const {
    return static_cast<std::size_t>(std::llround(t_end / dt_sample));
}

void CircuitScenario::validate() const {
    const auto bad = [](const std::string& what) { throw Error(ErrorCode::InvalidScenario, what); };
    if (!(std::isfinite(f0) && f0 > 0.0)) bad("f0 must be > 0");
    if (!(dt_sim > 0.0 && dt_sample > 0.0)) bad("time steps must be > 0");
    if (dt_sim > dt_sample * (1.0 + 1e-12)) bad("dt_sim must not exceed dt_sample");
    if (!(t_end > 0.0)) bad("t_end must be > 0");
    if (!(t_fault < t_end)) bad("t_fault must precede t_end");
    if (!(std::isfinite(vll_rms) && vll_rms >= 0.0)) bad("source voltage must be >= 0");
    for (double z : {rs, ls, rc, lc, rg})
        if (!(std::isfinite(z) && z >= 0.0)) bad("impedance parameters must be >= 0");
    const double ratio = dt_sample / dt_sim;
    if (std::abs(ratio - std::round(ratio)) > 1e-6 * ratio) bad("dt_sample must be an integer multiple of dt_sim");
    if (sample_count() < 3) bad("scenario yields fewer than 3 samples");
    try {
        load.validate();
    } catch (const Error& e) {
        bad(e.what());
    }
    if (fault.is_fault() && !load.rf) bad("fault scenario needs a fault resistance");
    if (conn == ConnectionKind::SinglePhase && fault.is_fault()) bad("single-phase scenarios cannot carry a fault");
    if (dt_sim > period() / 20.0)
        throw Error(ErrorCode::StepTooLarge, "dt_sim must not exceed 1/20 of the fundamental period");
}

CircuitScenario reference_scenario(ConnectionKind conn, const FaultKind& fault) {
    CircuitScenario s;
    s.conn = conn;
    s.fault = fault;
    if (conn == ConnectionKind::SinglePhase) {
        s.load = {19.2, 25.465e-3, std::nullopt};
        s.vll_rms = 240.0;
        s.t_end = 10e-3;
        s.t_fault = 0.0;
        s.dt_sample = 100e-6;
        return s;
    }
    s.vll_rms = 480.0;
    s.rs = 19.2;
    s.ls = 25.465e-3;
    s.rc = 183.7e-3;
    s.lc = 26.6e-3 / kNominalOmega;  // 26.6 mOhm reactance at 60 Hz
    s.rg = 10e-3;
    s.t_end = 0.2;
    s.t_fault = 0.05;
    s.dt_sample = 500e-6;
    if (conn == ConnectionKind::GroundedWye)
        s.load = {18.432, 24.446e-3, 1e-3};
    else
        s.load = {55.296, 73.339e-3, 1e-3};
    return s;
}

SampledWindow simulate(const CircuitScenario& s) {
    s.validate();
    Network net = build_network(s);
    for (Branch& br : net.branches) br.prepare(s.dt_sim);
    initialize_steady_state(net, s);

    const NodalSolver open(net, false);
    std::optional<NodalSolver> closed;
    if (s.fault.is_fault()) closed.emplace(net, true);

    const std::size_t n = s.sample_count();
    const auto steps_per_sample = static_cast<std::size_t>(std::llround(s.dt_sample / s.dt_sim));
    const bool three_phase = s.conn != ConnectionKind::SinglePhase;

    SampledWindow::ChannelMap out;
    for (Channel c : required_channels(s.conn)) out[c].reserve(n);

    Eigen::Vector3d u = Eigen::Vector3d::Zero();
    std::array<double, 3> e = source_voltages(s, 0.0);
    if (net.unknowns > 0) {
        // terminal voltages at t = 0 from the line branch drops
        for (int p = 0; p < 3; ++p) {
            const Branch& line = net.branches[static_cast<std::size_t>(net.line[static_cast<std::size_t>(p)])];
            u(p) = e[static_cast<std::size_t>(p)] - line.v;
        }
    }

    const auto record = [&](bool fault_closed) {
        if (!three_phase) {
            out[Channel::v].push_back(e[0]);
            out[Channel::i].push_back(net.branches[0].i);
            return;
        }
        std::array<double, 3> vt{};
        for (int p = 0; p < 3; ++p) vt[static_cast<std::size_t>(p)] = node_voltage(net.terminal[static_cast<std::size_t>(p)], u, e);
        for (Phase p : kPhases) {
            const auto k = static_cast<std::size_t>(index(p));
            out[phase_voltage(p)].push_back(vt[k]);
            double current = 0.0;
            if (net.line[k] >= 0) {
                current = net.branches[static_cast<std::size_t>(net.line[k])].i;
            } else {
                // ideal line: KCL at the terminal
                for (const Branch& br : net.branches) {
                    if (br.switched && !fault_closed) continue;
                    if (br.from == net.terminal[k]) current += br.i;
                    if (br.to == net.terminal[k]) current -= br.i;
                }
            }
            out[line_current(p)].push_back(current);
        }
        if (s.conn == ConnectionKind::Delta) {
            for (PhasePair pair : kPairs) {
                const auto [p, q] = terminals(pair);
                out[line_voltage(pair)].push_back(vt[static_cast<std::size_t>(index(p))] -
                                                  vt[static_cast<std::size_t>(index(q))]);
            }
        }
    };

    const double fault_time = s.t_fault - 1e-3 * s.dt_sim;
    bool fault_closed = s.fault.is_fault() && 0.0 >= fault_time;
    if (fault_closed) throw Error(ErrorCode::InvalidScenario, "fault must close after t = 0");
    record(false);

    const std::size_t total_steps = (n - 1) * steps_per_sample;
    for (std::size_t m = 1; m <= total_steps; ++m) {
        const double t = static_cast<double>(m) * s.dt_sim;
        e = source_voltages(s, t);
        fault_closed = s.fault.is_fault() && t >= fault_time;
        const NodalSolver& solver = fault_closed ? *closed : open;
        // history must be taken from the previous step before updating
        std::vector<double> hist(net.branches.size());
        for (std::size_t k = 0; k < net.branches.size(); ++k) hist[k] = net.branches[k].history();
        u = solver.solve(e);
        for (std::size_t k = 0; k < net.branches.size(); ++k) {
            Branch& br = net.branches[k];
            if (!solver.active(br)) continue;
            const double v = node_voltage(br.from, u, e) - node_voltage(br.to, u, e);
            br.i = br.b * v + hist[k];
            br.v = v;
        }
        if (m % steps_per_sample == 0) record(fault_closed);
    }
    return make_window(s.dt_sample, std::move(out), 0.0);
}

SteadyStatePhasors steady_state_phasors(const SampledWindow& w, ConnectionKind conn, double f0, double t_from) {
    const double period = 1.0 / f0;
    const double t_last = w.time(w.size() - 1) + w.dt();
    const auto first = static_cast<std::size_t>(std::max(0.0, std::ceil((t_from - w.t0()) / w.dt() - 1e-9)));
    if (first >= w.size()) throw Error(ErrorCode::WindowTooShort, "t_from lies past the end of the window");
    const double available = t_last - w.time(first);
    const auto cycles = static_cast<std::size_t>(std::floor(available / period + 1e-9));
    if (cycles < 2) throw Error(ErrorCode::WindowTooShort, "fewer than 2 full cycles after t_from");
    const auto count = std::min(w.size() - first,
                                static_cast<std::size_t>(std::llround(static_cast<double>(cycles) * period / w.dt())));
    const SampledWindow seg = w.slice(first, count);

    SteadyStatePhasors out;
    const auto fit = [&](Channel c) { return fundamental_phasor(seg.channel(c), seg.dt(), f0, seg.t0()); };
    if (conn == ConnectionKind::SinglePhase) {
        out.v[0] = fit(Channel::v);
        out.i[0] = fit(Channel::i);
        return out;
    }
    for (Phase p : kPhases) {
        out.v[static_cast<std::size_t>(index(p))] = fit(phase_voltage(p));
        out.i[static_cast<std::size_t>(index(p))] = fit(line_current(p));
    }
    return out;
}

SteadyStatePhasors steady_state_phasors(const CircuitScenario& s, double t_from) {
    return steady_state_phasors(simulate(s), s.conn, s.f0, t_from);
}

}  // namespace dsep
