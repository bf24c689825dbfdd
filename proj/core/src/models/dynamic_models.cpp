#include "dsep/models/dynamic_models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "dsep/error.hpp"
#include "internal.hpp"

namespace dsep::models {

namespace {

using Index = Eigen::Index;

std::string lower(std::string_view s) {
    std::string out(s);
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

std::string tag(Phase p) { return lower(to_string(p)); }
std::string tag(PhasePair p) { return lower(to_string(p)); }

struct Prefit {
    Complex y;                  // branch admittance
    std::optional<double> g_f;  // fault conductance, when the hypothesis has one
};

class Builder {
public:
    Builder(const ModelId& id, const SampledWindow& w, double f0)
        : id_(id), w_(w), n_(static_cast<Index>(w.size())), dt_(w.dt()), omega_(2.0 * std::numbers::pi * f0),
          f0_(f0), r_(id.rotation()) {}

    ModelProblem build(const std::optional<Bases>& bases);

private:
    // measured data of a prototype phase / pair, taken from the rotated channel
    std::span<const double> vph(Phase p) const { return w_.channel(phase_voltage(rotate(p, r_))); }
    std::span<const double> vll(PhasePair p) const { return w_.channel(line_voltage(rotate(p, r_))); }
    std::span<const double> cur(Phase p) const { return w_.channel(line_current(rotate(p, r_))); }
    Complex phasor(std::span<const double> s) const { return fundamental_phasor(s, dt_, f0_, w_.t0()).complex(); }

    void voltage_rows(const std::string& name, std::span<const double> y, Index vr, Index vl) {
        sys_->begin_block(name, RowKind::Voltage);
        for (Index n = 0; n < n_; ++n) {
            sys_->begin_row(y[static_cast<std::size_t>(n)]);
            sys_->linear(vr + n, 1.0);
            if (vl >= 0) sys_->linear(vl + n, 1.0);
        }
    }

    void simpson_rows(const std::string& name, Index g, Index lam, Index vr, Index vl) {
        sys_->begin_block(name, RowKind::Constraint);
        const double k = dt_ / 3.0;
        for (Index n = 2; n < n_; ++n) {
            sys_->begin_row(0.0);
            sys_->bilinear(g, vr + n, 1.0);
            sys_->bilinear(g, vr + n - 2, -1.0);
            sys_->bilinear(lam, vl + n, -k);
            sys_->bilinear(lam, vl + n - 1, -4.0 * k);
            sys_->bilinear(lam, vl + n - 2, -k);
        }
    }

    void gauge_rows(const std::array<Index, 3>& vr) {
        sys_->begin_block("gauge", RowKind::Gauge);
        // the circulating mode has a decaying and a growing (spurious Simpson)
        // component; one row at each end of the window pins both
        for (Index n : {Index{0}, n_ - 1}) {
            sys_->begin_row(0.0);
            for (Index b : vr) sys_->linear(b + n, 1.0);
        }
    }

    Prefit prefit() const;
    Eigen::VectorXd start_point(const Bases& bases) const;

    const ModelId& id_;
    const SampledWindow& w_;
    Index n_;
    double dt_;
    double omega_;
    double f0_;
    int r_;

    StateLayout layout_;
    std::shared_ptr<BilinearSystem> sys_;
    // slot offsets, -1 when absent; per prototype phase (wye) or pair (delta)
    Index g_ = -1;
    Index lam_ = -1;
    Index gf_ = -1;
    Index vf_ = -1;
    std::array<Index, 3> vr_{-1, -1, -1};
    std::array<Index, 3> vl_{-1, -1, -1};
    // branch voltage each v_r + v_l pair splits, per prototype branch
    std::array<std::span<const double>, 3> branch_v_{};
};

Prefit Builder::prefit() const {
    using enum Phase;
    using enum PhasePair;
    const auto safe = [](Complex num, Complex den) { return std::abs(den) > 0.0 ? num / den : Complex{}; };
    // magnitude rather than real part: the fault voltage is often buried in
    // noise, and its phase with it
    const auto real_gf = [](Complex y) -> std::optional<double> { return std::abs(y); };
    Prefit p;
    switch (id_.conn) {
        case ConnectionKind::SinglePhase:
            p.y = safe(phasor(w_.channel(Channel::i)), phasor(w_.channel(Channel::v)));
            break;
        case ConnectionKind::GroundedWye: {
            std::array<Complex, 3> y{};
            for (Phase ph : kPhases) y[static_cast<std::size_t>(index(ph))] = safe(phasor(cur(ph)), phasor(vph(ph)));
            switch (id_.fault.type()) {
                case FaultKind::Type::None: p.y = (y[0] + y[1] + y[2]) / 3.0; break;
                case FaultKind::Type::LineGround:
                    p.y = 0.5 * (y[1] + y[2]);
                    p.g_f = real_gf(y[0]);
                    break;
                case FaultKind::Type::LineLine:
                    p.y = y[2];
                    p.g_f = real_gf(safe(phasor(cur(A)) - p.y * phasor(vph(A)), phasor(vph(A)) - phasor(vph(B))));
                    break;
            }
            break;
        }
        case ConnectionKind::Delta: {
            const Complex vab = phasor(vll(AB));
            const Complex vbc = phasor(vll(BC));
            const Complex vca = phasor(vll(CA));
            const Complex ia = phasor(cur(A));
            const Complex ib = phasor(cur(B));
            const Complex ic = phasor(cur(C));
            switch (id_.fault.type()) {
                case FaultKind::Type::None:
                    p.y = (safe(ia, vab - vca) + safe(ib, vbc - vab) + safe(ic, vca - vbc)) / 3.0;
                    break;
                case FaultKind::Type::LineLine:
                    p.y = safe(ic, vca - vbc);
                    p.g_f = real_gf(safe(ia + p.y * vca, vab));
                    break;
                case FaultKind::Type::LineGround:
                    p.y = 0.5 * (safe(ib, vbc - vab) + safe(ic, vca - vbc));
                    p.g_f = real_gf(safe(ia - p.y * (vab - vca), phasor(vph(A))));
                    break;
            }
            break;
        }
    }
    return p;
}

Eigen::VectorXd Builder::start_point(const Bases& bases) const {
    const Prefit pf = prefit();
    const Complex z = std::abs(pf.y) > 0.0 && std::isfinite(std::abs(pf.y)) ? 1.0 / pf.y : Complex(1.0, 1.0);
    const double zmag = std::abs(z);
    const double r0 = z.real() > 0.0 ? z.real() : 1e-3 * zmag;
    const double x0 = z.imag() > 0.0 ? z.imag() : 1e-3 * zmag;
    const double g0 = 1.0 / r0;

    Eigen::VectorXd x = Eigen::VectorXd::Zero(layout_.size());
    x(g_) = g0;
    x(lam_) = omega_ / x0;
    if (gf_ >= 0) x(gf_) = pf.g_f && std::isfinite(*pf.g_f) && *pf.g_f > g0 ? *pf.g_f : 10.0 * g0;

    const double split_r = z.imag() > 0.0 ? r0 / (r0 + z.imag()) : 1.0;
    for (std::size_t b = 0; b < 3; ++b) {
        if (vr_[b] < 0) continue;
        const auto v = branch_v_[b];
        for (Index n = 0; n < n_; ++n) {
            const double vn = v[static_cast<std::size_t>(n)];
            if (vl_[b] < 0) {
                x(vr_[b] + n) = vn;
            } else {
                x(vr_[b] + n) = split_r * vn;
                x(vl_[b] + n) = (1.0 - split_r) * vn;
            }
        }
    }
    if (vf_ >= 0) {
        const auto v = vph(Phase::A);
        for (Index n = 0; n < n_; ++n) x(vf_ + n) = v[static_cast<std::size_t>(n)];
    }
    const auto refined = [&](const Eigen::VectorXd& seed) {
        try {
            return refine_states(*sys_, bases, seed);
        } catch (const Error&) {
            return seed;
        }
    };
    if (gf_ < 0) return refined(x);

    // The fault voltage is often too small to seed G_f reliably; also try a
    // logarithmic sweep and keep whichever start fits best with exact states.
    std::vector<double> candidates{x(gf_)};
    for (double k = 1.0; k <= 1e4; k *= 10.0) candidates.push_back(k * g0);
    const Eigen::VectorXd w = sys_->weights(bases);
    Eigen::VectorXd best = x;
    double best_j = std::numeric_limits<double>::infinity();
    for (double gf : candidates) {
        Eigen::VectorXd trial = x;
        trial(gf_) = gf;
        trial = refined(trial);
        const double j = w.cwiseProduct(sys_->measured() - sys_->h(trial)).squaredNorm();
        if (j < best_j) {
            best_j = j;
            best = std::move(trial);
        }
    }
    return best;
}

ModelProblem Builder::build(const std::optional<Bases>& bases) {
    using enum Phase;
    if (id_.family != Family::Dynamic) throw Error(ErrorCode::ChannelMismatch, id_.name() + " is not a dynamic model");
    if (n_ < 5) throw Error(ErrorCode::WindowTooShort, "dynamic models need at least 5 samples");
    if (id_.conn == ConnectionKind::SinglePhase && id_.fault.is_fault())
        throw Error(ErrorCode::UnsupportedCombination, "single-phase models have no fault variant");
    for (Channel c : required_channels(id_.conn))
        if (!w_.has(c))
            throw Error(ErrorCode::ChannelMismatch,
                        id_.name() + " needs channel '" + std::string(channel_name(c)) + "'");

    const FaultKind::Type ft = id_.fault.type();
    g_ = layout_.add("G", 1, true);
    lam_ = layout_.add("Lambda", 1, true);
    if (ft != FaultKind::Type::None) gf_ = layout_.add("G_f", 1, true);

    if (id_.conn == ConnectionKind::SinglePhase) {
        vr_[0] = layout_.add("v_r", n_);
        vl_[0] = layout_.add("v_l", n_);
        branch_v_[0] = w_.channel(Channel::v);
        sys_ = std::make_shared<BilinearSystem>(layout_);
        voltage_rows("v:v", branch_v_[0], vr_[0], vl_[0]);
        sys_->begin_block("i:i", RowKind::Current);
        const auto i = w_.channel(Channel::i);
        for (Index n = 0; n < n_; ++n) {
            sys_->begin_row(i[static_cast<std::size_t>(n)]);
            sys_->bilinear(g_, vr_[0] + n, 1.0);
        }
        simpson_rows("z", g_, lam_, vr_[0], vl_[0]);
    } else if (id_.conn == ConnectionKind::GroundedWye) {
        const bool lg = ft == FaultKind::Type::LineGround;
        for (Phase p : kPhases) vr_[static_cast<std::size_t>(index(p))] = layout_.add("v_r" + tag(rotate(p, r_)), n_);
        for (Phase p : kPhases) {
            if (lg && p == A) continue;  // faulted branch is the fault resistance alone
            vl_[static_cast<std::size_t>(index(p))] = layout_.add("v_l" + tag(rotate(p, r_)), n_);
        }
        for (Phase p : kPhases) branch_v_[static_cast<std::size_t>(index(p))] = vph(p);
        sys_ = std::make_shared<BilinearSystem>(layout_);

        for (Phase p : kPhases) {
            const auto k = static_cast<std::size_t>(index(p));
            voltage_rows("v:v" + tag(rotate(p, r_)), vph(p), vr_[k], vl_[k]);
        }
        for (Phase p : kPhases) {
            const auto k = static_cast<std::size_t>(index(p));
            sys_->begin_block("i:i" + tag(rotate(p, r_)), RowKind::Current);
            const auto i = cur(p);
            for (Index n = 0; n < n_; ++n) {
                sys_->begin_row(i[static_cast<std::size_t>(n)]);
                if (lg && p == A) {
                    sys_->bilinear(gf_, vr_[k] + n, 1.0);
                    continue;
                }
                sys_->bilinear(g_, vr_[k] + n, 1.0);
                if (ft == FaultKind::Type::LineLine && p != C) {
                    // G_f (v_a - v_b) enters i_a and leaves through i_b
                    const double s = p == A ? 1.0 : -1.0;
                    sys_->bilinear(gf_, vr_[0] + n, s);
                    sys_->bilinear(gf_, vl_[0] + n, s);
                    sys_->bilinear(gf_, vr_[1] + n, -s);
                    sys_->bilinear(gf_, vl_[1] + n, -s);
                }
            }
        }
        for (Phase p : kPhases) {
            const auto k = static_cast<std::size_t>(index(p));
            if (vl_[k] < 0) continue;
            simpson_rows("z:" + tag(rotate(p, r_)), g_, lam_, vr_[k], vl_[k]);
        }
    } else {
        using enum PhasePair;
        const bool ll = ft == FaultKind::Type::LineLine;
        const bool lg = ft == FaultKind::Type::LineGround;
        for (PhasePair p : kPairs) vr_[static_cast<std::size_t>(index(p))] = layout_.add("v_r" + tag(rotate(p, r_)), n_);
        for (PhasePair p : kPairs) {
            if (ll && p == AB) continue;  // faulted branch is the fault resistance alone
            vl_[static_cast<std::size_t>(index(p))] = layout_.add("v_l" + tag(rotate(p, r_)), n_);
        }
        if (lg) vf_ = layout_.add("v_f", n_);
        for (PhasePair p : kPairs) branch_v_[static_cast<std::size_t>(index(p))] = vll(p);
        sys_ = std::make_shared<BilinearSystem>(layout_);

        for (PhasePair p : kPairs) {
            const auto k = static_cast<std::size_t>(index(p));
            voltage_rows("v:v" + tag(rotate(p, r_)), vll(p), vr_[k], vl_[k]);
        }
        if (lg) voltage_rows("v:v" + tag(rotate(A, r_)), vph(A), vf_, -1);

        // line current of terminal t: branch leaving t minus branch arriving at t
        for (Phase t : kPhases) {
            const PhasePair out = static_cast<PhasePair>(index(t));
            const PhasePair in = rotate(out, 2);
            const auto ko = static_cast<std::size_t>(index(out));
            const auto ki = static_cast<std::size_t>(index(in));
            sys_->begin_block("i:i" + tag(rotate(t, r_)), RowKind::Current);
            const auto i = cur(t);
            for (Index n = 0; n < n_; ++n) {
                sys_->begin_row(i[static_cast<std::size_t>(n)]);
                sys_->bilinear(ll && out == AB ? gf_ : g_, vr_[ko] + n, 1.0);
                sys_->bilinear(ll && in == AB ? gf_ : g_, vr_[ki] + n, -1.0);
                if (lg && t == A) sys_->bilinear(gf_, vf_ + n, 1.0);
            }
        }
        for (PhasePair p : kPairs) {
            const auto k = static_cast<std::size_t>(index(p));
            if (vl_[k] < 0) continue;
            simpson_rows("z:" + tag(rotate(p, r_)), g_, lam_, vr_[k], vl_[k]);
        }
        if (!ll) gauge_rows(vr_);
    }

    ModelProblem out;
    out.id = id_;
    out.omega = omega_;
    out.bases = bases.value_or(default_bases(w_));
    out.system = sys_;
    out.problem = make_problem(sys_, out.bases);
    out.x0 = start_point(out.bases);
    return out;
}

}  // namespace

Bases default_bases(const SampledWindow& w) {
    Bases b;
    b.v_base = 0.0;
    b.i_base = 0.0;
    for (const auto& [c, samples] : w.channels()) {
        double peak = 0.0;
        for (double s : samples) peak = std::max(peak, std::abs(s));
        double& base = is_voltage(c) ? b.v_base : b.i_base;
        base = std::max(base, peak);
    }
    if (b.v_base == 0.0) b.v_base = 1.0;
    if (b.i_base == 0.0) b.i_base = 1.0;
    return b;
}

ModelProblem build_dynamic_problem(const ModelId& id, const SampledWindow& w, const std::optional<Bases>& bases,
                                   double f0) {
    return Builder(id, w, f0).build(bases);
}

Eigen::VectorXd initialize_state(const ModelId& id, const SampledWindow& w, double f0) {
    return build_dynamic_problem(id, w, std::nullopt, f0).x0;
}

Estimates detail::dynamic_estimates(const ModelProblem& mp, const Eigen::VectorXd& x) {
    const StateLayout& layout = mp.system->layout();
    Estimates e;
    e.r = 1.0 / x(layout.at("G"));
    e.l = 1.0 / x(layout.at("Lambda"));
    e.x = mp.omega * e.l;
    if (mp.id.fault.is_fault()) e.rf = 1.0 / x(layout.at("G_f"));
    return e;
}

}  // namespace dsep::models
