#include "dsep/models/phasor_models.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <numbers>

#include "dsep/error.hpp"
#include "dsep/tdsim.hpp"
#include "dsep/window.hpp"
#include "internal.hpp"

namespace dsep::models {

namespace {

struct CTerm {
    double c;
    Eigen::Index a;
    Eigen::Index b = -1;  // second complex factor, or -1
};

// One complex output written as its real and imaginary rows.
void complex_row(BilinearSystem& sys, Complex measured, std::initializer_list<CTerm> terms) {
    sys.begin_row(measured.real());
    for (const CTerm& t : terms) {
        if (t.b < 0) {
            sys.linear(t.a, t.c);
        } else {
            sys.bilinear(t.a, t.b, t.c);
            sys.bilinear(t.a + 1, t.b + 1, -t.c);
        }
    }
    sys.begin_row(measured.imag());
    for (const CTerm& t : terms) {
        if (t.b < 0) {
            sys.linear(t.a + 1, t.c);
        } else {
            sys.bilinear(t.a, t.b + 1, t.c);
            sys.bilinear(t.a + 1, t.b, t.c);
        }
    }
}

void put(Eigen::VectorXd& x, Eigen::Index slot, Complex z) {
    x(slot) = z.real();
    x(slot + 1) = z.imag();
}

Complex get(const Eigen::VectorXd& x, Eigen::Index slot) { return {x(slot), x(slot + 1)}; }

Complex safe_div(Complex num, Complex den) {
    return std::abs(den) > 0.0 ? num / den : Complex(0.0, 0.0);
}

std::string phase_tag(Phase p) {
    std::string s(to_string(p));
    s[0] = static_cast<char>(std::tolower(static_cast<unsigned char>(s[0])));
    return s;
}

}  // namespace

PhasorMeasurement to_measurement(ConnectionKind conn, const PhasorSnapshot& snapshot) {
    PhasorMeasurement m;
    m.conn = conn;
    m.v = to_complex(snapshot.voltages);
    m.i = to_complex(snapshot.currents);
    return m;
}

Bases default_bases(const PhasorMeasurement& m) {
    const int count = m.conn == ConnectionKind::SinglePhase ? 1 : 3;
    Bases b;
    b.v_base = 0.0;
    b.i_base = 0.0;
    for (int k = 0; k < count; ++k) {
        b.v_base = std::max(b.v_base, std::abs(m.v[static_cast<std::size_t>(k)]));
        b.i_base = std::max(b.i_base, std::abs(m.i[static_cast<std::size_t>(k)]));
    }
    if (b.v_base == 0.0) b.v_base = 1.0;
    if (b.i_base == 0.0) b.i_base = 1.0;
    return b;
}

ModelProblem build_phasor_problem(const ModelId& id, const PhasorMeasurement& m, const std::optional<Bases>& bases) {
    if (id.family != Family::Phasor)
        throw Error(ErrorCode::ChannelMismatch, id.name() + " is not a phasor model");
    if (id.conn != m.conn)
        throw Error(ErrorCode::ChannelMismatch, id.name() + " expects a " + std::string(to_string(id.conn)) +
                                                    " measurement, got " + std::string(to_string(m.conn)));
    for (std::size_t k = 0; k < 3; ++k)
        if (!std::isfinite(std::abs(m.v[k])) || !std::isfinite(std::abs(m.i[k])))
            throw Error(ErrorCode::NonFinite, "phasor measurement is not finite");

    const int r = id.rotation();
    // measured quantities of prototype phase p
    const auto V = [&](Phase p) { return m.v[static_cast<std::size_t>(index(rotate(p, r)))]; };
    const auto I = [&](Phase p) { return m.i[static_cast<std::size_t>(index(rotate(p, r)))]; };
    const auto name_of = [&](Phase p) { return phase_tag(rotate(p, r)); };

    StateLayout layout;
    Eigen::VectorXd x0;
    std::shared_ptr<BilinearSystem> sys;

    using enum Phase;
    if (id.conn == ConnectionKind::SinglePhase) {
        const Eigen::Index z = layout.add("Z", 2, true);
        const Eigen::Index iz = layout.add("I_z", 2);
        sys = std::make_shared<BilinearSystem>(layout);
        sys->begin_block("V:v", RowKind::Voltage);
        complex_row(*sys, m.v[0], {{1.0, z, iz}});
        sys->begin_block("I:i", RowKind::Current);
        complex_row(*sys, m.i[0], {{1.0, iz}});
        x0 = Eigen::VectorXd::Zero(layout.size());
        put(x0, z, safe_div(m.v[0], m.i[0]));
        put(x0, iz, m.i[0]);
    } else if (id.unbalanced) {
        std::array<Eigen::Index, 3> y{};
        std::array<Eigen::Index, 3> vz{};
        for (Phase p : kPhases) y[static_cast<std::size_t>(index(p))] = layout.add("Y_" + name_of(p), 2, true);
        for (Phase p : kPhases) vz[static_cast<std::size_t>(index(p))] = layout.add("V_z" + name_of(p), 2);
        sys = std::make_shared<BilinearSystem>(layout);
        for (Phase p : kPhases) {
            const auto k = static_cast<std::size_t>(index(p));
            sys->begin_block("I:i" + name_of(p), RowKind::Current);
            complex_row(*sys, I(p), {{1.0, y[k], vz[k]}});
        }
        for (Phase p : kPhases) {
            const auto k = static_cast<std::size_t>(index(p));
            sys->begin_block("V:v" + name_of(p), RowKind::Voltage);
            complex_row(*sys, V(p), {{1.0, vz[k]}});
        }
        x0 = Eigen::VectorXd::Zero(layout.size());
        for (Phase p : kPhases) {
            const auto k = static_cast<std::size_t>(index(p));
            put(x0, y[k], safe_div(I(p), V(p)));
            put(x0, vz[k], V(p));
        }
    } else {
        const bool delta = id.conn == ConnectionKind::Delta;
        const bool lg = id.fault.type() == FaultKind::Type::LineGround;
        if (!id.fault.is_fault() || (!delta && lg))
            throw Error(ErrorCode::UnsupportedCombination, "no phasor model for " + id.name());
        const Eigen::Index yl = layout.add(delta ? "Y_ll" : "Y_l", 2, true);
        const Eigen::Index yf = layout.add("Y_f", 2, true);
        const Eigen::Index za = layout.add("V_z" + name_of(A), 2);
        const Eigen::Index zb = layout.add("V_z" + name_of(B), 2);
        const Eigen::Index zc = layout.add("V_z" + name_of(C), 2);
        sys = std::make_shared<BilinearSystem>(layout);

        const auto current_block = [&](Phase p) { sys->begin_block("I:i" + name_of(p), RowKind::Current); };
        Complex yl0;
        Complex yf0;
        if (!delta) {
            // grounded-wye, fault across A-B, all branches intact
            current_block(A);
            complex_row(*sys, I(A), {{1.0, yl, za}, {1.0, yf, za}, {-1.0, yf, zb}});
            current_block(B);
            complex_row(*sys, I(B), {{-1.0, yf, za}, {1.0, yl, zb}, {1.0, yf, zb}});
            current_block(C);
            complex_row(*sys, I(C), {{1.0, yl, zc}});
            yl0 = safe_div(I(C), V(C));
            yf0 = safe_div(I(A) - yl0 * V(A), V(A) - V(B));
        } else if (!lg) {
            // delta, branch AB replaced by the fault conductance
            current_block(A);
            complex_row(*sys, I(A), {{1.0, yf, za}, {1.0, yl, za}, {-1.0, yf, zb}, {-1.0, yl, zc}});
            current_block(B);
            complex_row(*sys, I(B), {{-1.0, yf, za}, {1.0, yf, zb}, {1.0, yl, zb}, {-1.0, yl, zc}});
            current_block(C);
            complex_row(*sys, I(C), {{-1.0, yl, za}, {-1.0, yl, zb}, {2.0, yl, zc}});
            yl0 = safe_div(I(C), 2.0 * V(C) - V(A) - V(B));
            yf0 = safe_div(I(A) - yl0 * (V(A) - V(C)), V(A) - V(B));
        } else {
            // delta, fault conductance from A to ground
            current_block(A);
            complex_row(*sys, I(A), {{1.0, yf, za}, {2.0, yl, za}, {-1.0, yl, zb}, {-1.0, yl, zc}});
            current_block(B);
            complex_row(*sys, I(B), {{-1.0, yl, za}, {2.0, yl, zb}, {-1.0, yl, zc}});
            current_block(C);
            complex_row(*sys, I(C), {{-1.0, yl, za}, {-1.0, yl, zb}, {2.0, yl, zc}});
            yl0 = safe_div(I(B), 2.0 * V(B) - V(A) - V(C));
            yf0 = safe_div(I(A) - yl0 * (2.0 * V(A) - V(B) - V(C)), V(A));
        }
        sys->begin_block("V:v" + name_of(A), RowKind::Voltage);
        complex_row(*sys, V(A), {{1.0, za}});
        sys->begin_block("V:v" + name_of(B), RowKind::Voltage);
        complex_row(*sys, V(B), {{1.0, zb}});
        sys->begin_block("V:v" + name_of(C), RowKind::Voltage);
        complex_row(*sys, V(C), {{1.0, zc}});

        x0 = Eigen::VectorXd::Zero(layout.size());
        put(x0, yl, yl0);
        put(x0, yf, yf0);
        put(x0, za, V(A));
        put(x0, zb, V(B));
        put(x0, zc, V(C));
    }

    ModelProblem out;
    out.id = id;
    out.bases = bases.value_or(default_bases(m));
    out.system = sys;
    out.problem = make_problem(sys, out.bases);
    out.x0 = std::move(x0);
    return out;
}

Estimates detail::phasor_estimates(const ModelProblem& mp, const Eigen::VectorXd& x) {
    const StateLayout& layout = mp.system->layout();
    const ModelId& id = mp.id;
    Estimates e;
    const auto set_impedance = [&](Complex z) {
        e.r = z.real();
        e.x = z.imag();
        e.l = z.imag() / mp.omega;
    };
    if (id.conn == ConnectionKind::SinglePhase) {
        set_impedance(get(x, layout.at("Z")));
        return e;
    }
    if (id.unbalanced) {
        std::array<Complex, 3> y{};
        for (Phase p : kPhases) y[static_cast<std::size_t>(index(p))] = get(x, layout.at("Y_" + phase_tag(p)));
        // faulted phase: largest conductance in excess of the other two
        double best = -std::numeric_limits<double>::infinity();
        Phase faulted = Phase::A;
        for (Phase p : kPhases) {
            const Complex others = 0.5 * (y[static_cast<std::size_t>(index(rotate(p, 1)))] +
                                          y[static_cast<std::size_t>(index(rotate(p, 2)))]);
            const double excess = (y[static_cast<std::size_t>(index(p))] - others).real();
            if (excess > best) {
                best = excess;
                faulted = p;
            }
        }
        const Complex load = 0.5 * (y[static_cast<std::size_t>(index(rotate(faulted, 1)))] +
                                    y[static_cast<std::size_t>(index(rotate(faulted, 2)))]);
        set_impedance(1.0 / load);
        e.faulted_phase = faulted;
        if (best > 0.0) e.rf = 1.0 / best;
        return e;
    }
    const bool delta = id.conn == ConnectionKind::Delta;
    set_impedance(1.0 / get(x, layout.at(delta ? "Y_ll" : "Y_l")));
    e.rf = 1.0 / get(x, layout.at("Y_f")).real();
    return e;
}

SampledWindow phasor_waveforms(const PhasorMeasurement& m, int cycles, double dt, double f0) {
    if (cycles < 1 || !(dt > 0.0) || !(f0 > 0.0))
        throw Error(ErrorCode::InvalidArgument, "phasor waveforms need cycles >= 1, dt > 0, f0 > 0");
    const auto n = static_cast<std::size_t>(std::llround(cycles / (f0 * dt)));
    const double w = 2.0 * std::numbers::pi * f0;
    const auto wave = [&](Complex phasor) {
        std::vector<double> s(n);
        for (std::size_t k = 0; k < n; ++k)
            s[k] = std::sqrt(2.0) * std::abs(phasor) * std::cos(w * static_cast<double>(k) * dt + std::arg(phasor));
        return s;
    };
    SampledWindow::ChannelMap channels;
    if (m.conn == ConnectionKind::SinglePhase) {
        channels[Channel::v] = wave(m.v[0]);
        channels[Channel::i] = wave(m.i[0]);
    } else {
        for (Phase p : kPhases) {
            channels[phase_voltage(p)] = wave(m.v[static_cast<std::size_t>(index(p))]);
            channels[line_current(p)] = wave(m.i[static_cast<std::size_t>(index(p))]);
        }
    }
    return make_window(dt, std::move(channels));
}

PhasorMeasurement measure_phasors(ConnectionKind conn, const SampledWindow& w, double f0) {
    const SteadyStatePhasors ss = steady_state_phasors(w, conn, f0, w.t0());
    return to_measurement(conn, PhasorSnapshot{ss.v, ss.i});
}

PhasorMeasurement noisy_measurement(const PhasorMeasurement& m, double fraction, std::uint64_t seed, int cycles,
                                    double dt, double f0) {
    const SampledWindow noisy = inject_noise(phasor_waveforms(m, cycles, dt, f0), fraction, seed);
    return measure_phasors(m.conn, noisy, f0);
}

}  // namespace dsep::models
