#include "dsep/protect.hpp"

#include <algorithm>
#include <boost/math/distributions/fisher_f.hpp>
#include <cmath>
#include <limits>

#include "dsep/error.hpp"
#include "dsep/models/dynamic_models.hpp"

namespace dsep {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Hypotheses that reduce to the no-fault model when G_f -> 0.
bool nests_no_fault(const models::ModelId& id) {
    if (id.family != models::Family::Dynamic) return false;
    const auto t = id.fault.type();
    return (id.conn == ConnectionKind::GroundedWye && t == FaultKind::Type::LineLine) ||
           (id.conn == ConnectionKind::Delta && t == FaultKind::Type::LineGround);
}

bool admissible(const HypothesisFit& f) { return f.converged && f.significant; }

// j values this small are numerically zero and compare equal.
constexpr double kExactFit = 1e-24;

bool ranks_before(const HypothesisFit& a, const HypothesisFit& b) {
    if (admissible(a) != admissible(b)) return admissible(a);
    if (a.converged != b.converged) return a.converged;
    const bool tie = a.j_normalized <= kExactFit && b.j_normalized <= kExactFit;
    if (!tie && a.j_normalized != b.j_normalized) return a.j_normalized < b.j_normalized;
    return a.dim_x < b.dim_x;
}

void apply_nested_test(std::vector<HypothesisFit>& fits, double alpha) {
    const auto nf = std::find_if(fits.begin(), fits.end(), [](const HypothesisFit& f) {
        return f.id.family == models::Family::Dynamic && !f.id.fault.is_fault();
    });
    if (nf == fits.end() || !nf->converged) return;
    for (HypothesisFit& f : fits) {
        if (!nests_no_fault(f.id) || !f.converged) continue;
        const double dof = static_cast<double>(f.dim_y - f.dim_x);
        if (dof < 1.0) continue;
        if (f.j <= 0.0) continue;
        const double stat = (nf->j - f.j) / (f.j / dof);
        const boost::math::fisher_f dist(1.0, dof);
        f.significant = stat > boost::math::quantile(boost::math::complement(dist, alpha));
    }
}

Classification rank(std::vector<HypothesisFit> fits, models::Family family, ConnectionKind conn, double alpha) {
    apply_nested_test(fits, alpha);
    if (std::none_of(fits.begin(), fits.end(), [](const HypothesisFit& f) { return f.converged; }))
        throw Error(ErrorCode::AllFitsFailed, "no hypothesis converged");
    std::stable_sort(fits.begin(), fits.end(), ranks_before);

    Classification c;
    c.family = family;
    c.conn = conn;
    c.winner = fits.front().id;
    const double jw = fits.front().j_normalized;
    double competitor = kInf;
    for (std::size_t k = 1; k < fits.size(); ++k)
        if (admissible(fits[k])) competitor = std::min(competitor, fits[k].j_normalized);
    c.margin = jw > kExactFit ? competitor / jw : (competitor > kExactFit ? kInf : 1.0);
    c.ranking = std::move(fits);
    return c;
}

}  // namespace

HypothesisFit fit_hypothesis(const models::ModelProblem& problem, const SolveOptions& opts) {
    HypothesisFit out;
    out.id = problem.id;
    out.dim_y = problem.problem.dim_y;
    out.dim_x = problem.problem.dim_x;
    try {
        const FitResult r = solve(problem.problem, problem.x0, opts);
        out.j = r.j;
        out.j_normalized = r.j_normalized;
        out.iters = r.iters;
        out.converged = r.converged;
        out.reason = r.reason;
        out.j_history = r.j_history;
        out.estimates = problem.estimates(r.x_hat);
    } catch (const Error& e) {
        out.error = e.what();
    }
    return out;
}

Classification classify(ConnectionKind conn, const SampledWindow& w, const ClassifyOptions& opts) {
    for (Channel c : required_channels(conn))
        if (!w.has(c))
            throw Error(ErrorCode::ChannelMismatch, "window lacks channel '" + std::string(channel_name(c)) + "'");
    if (w.size() < 5) throw Error(ErrorCode::WindowTooShort, "dynamic classification needs at least 5 samples");
    const models::Bases bases = opts.bases.value_or(models::default_bases(w));
    std::vector<HypothesisFit> fits;
    for (const models::ModelId& id : models::hypothesis_bank(models::Family::Dynamic, conn)) {
        HypothesisFit f;
        try {
            f = fit_hypothesis(models::build_dynamic_problem(id, w, bases, opts.f0), opts.solve);
        } catch (const Error& e) {
            f.id = id;
            f.error = e.what();
        }
        fits.push_back(std::move(f));
    }
    return rank(std::move(fits), models::Family::Dynamic, conn, opts.alpha);
}

Classification classify(const models::PhasorMeasurement& m, const ClassifyOptions& opts) {
    const models::Bases bases = opts.bases.value_or(models::default_bases(m));
    std::vector<HypothesisFit> fits;
    for (const models::ModelId& id : models::hypothesis_bank(models::Family::Phasor, m.conn)) {
        HypothesisFit f;
        try {
            f = fit_hypothesis(models::build_phasor_problem(id, m, bases), opts.solve);
        } catch (const Error& e) {
            f.id = id;
            f.error = e.what();
        }
        fits.push_back(std::move(f));
    }
    Classification c = rank(std::move(fits), models::Family::Phasor, m.conn, opts.alpha);
    if (c.winner.unbalanced)
        c.warnings.emplace_back("the unbalanced grounded-wye model fits any data exactly; margin is not informative");
    return c;
}

FaultKind identified_fault(const Classification& c, const TripPolicy& policy) {
    const HypothesisFit& w = c.best();
    if (!w.id.unbalanced) return w.id.fault;
    if (!w.estimates || !w.estimates->rf || !w.estimates->faulted_phase) return FaultKind::none();
    const double z = std::hypot(w.estimates->r, w.estimates->x);
    // excess conductance 1/rf against the load admittance 1/|Z|
    return z / *w.estimates->rf > policy.unbalance_min ? FaultKind::line_ground(*w.estimates->faulted_phase)
                                                       : FaultKind::none();
}

TripDecision trip_decision(const Classification& c, const TripPolicy& policy) {
    TripDecision d;
    d.fault = identified_fault(c, policy);
    if (!d.fault.is_fault()) {
        d.reason = "no fault identified";
        return d;
    }
    if (policy.require_converged && !c.best().converged) {
        d.reason = "winning fit did not converge";
        return d;
    }
    if (!(c.margin >= policy.margin_min)) {
        d.reason = "insufficient margin";
        return d;
    }
    d.trip = true;
    d.reason = "fault identified";
    return d;
}

SampledWindow select_post_fault_window(const SampledWindow& w, double t_fault, double f0,
                                       std::vector<std::string>* warnings) {
    if (!(f0 > 0.0)) throw Error(ErrorCode::InvalidArgument, "f0 must be positive");
    const double start = t_fault + 1.0 / f0;
    const double offset = (start - w.t0()) / w.dt();
    const auto first = static_cast<std::size_t>(std::max(0.0, std::ceil(offset - 1e-9)));
    if (first >= w.size()) throw Error(ErrorCode::WindowTooShort, "no samples after the fault transient");
    const auto wanted = static_cast<std::size_t>(std::llround(12.0 / (f0 * w.dt())));
    const std::size_t count = std::min(wanted, w.size() - first);
    if (count < wanted && warnings)
        warnings->push_back("post-fault window holds " + std::to_string(count) + " samples, fewer than 12 cycles");
    return w.slice(first, count);
}

}  // namespace dsep
