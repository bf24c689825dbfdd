#include "dsep/cli/experiments.hpp"

#include <cmath>

#include "dsep/error.hpp"
#include "dsep/models/dynamic_models.hpp"

namespace dsep::cli {
namespace {

constexpr int kPhasorCycles = 12;

ExperimentConfig phasor_case(std::string name, ConnectionKind conn, FaultKind fault) {
    ExperimentConfig c;
    c.name = std::move(name);
    c.family = models::Family::Phasor;
    c.scenario.conn = conn;
    c.scenario.fault = fault;
    const double w = 2.0 * std::numbers::pi * c.scenario.f0;
    switch (conn) {
        case ConnectionKind::SinglePhase:
            c.scenario.vll_rms = 240.0;
            c.scenario.load = {19.2, 9.6 / w, std::nullopt};
            break;
        case ConnectionKind::GroundedWye:
            c.scenario.vll_rms = 480.0;
            c.scenario.load = {7.387, 3.693 / w, 0.923};
            break;
        case ConnectionKind::Delta:
            c.scenario.vll_rms = 480.0;
            c.scenario.load = {22.160, 11.080 / w, 2.770};
            break;
    }
    if (!fault.is_fault()) c.scenario.load.rf.reset();
    return c;
}

ExperimentConfig dynamic_case(std::string name, ConnectionKind conn, FaultKind fault, std::uint64_t seed) {
    ExperimentConfig c;
    c.name = std::move(name);
    c.family = models::Family::Dynamic;
    c.scenario = reference_scenario(conn, fault);
    if (!fault.is_fault()) c.scenario.load.rf.reset();
    c.noise = {0.1, seed};
    return c;
}

}  // namespace

std::vector<ExperimentConfig> reference_experiments() {
    using CK = ConnectionKind;
    const FaultKind lg = FaultKind::line_ground(Phase::A);
    const FaultKind ll = FaultKind::line_line(PhasePair::AB);
    std::vector<ExperimentConfig> out{
        phasor_case("phasor-single-phase", CK::SinglePhase, FaultKind::none()),
        phasor_case("phasor-gwye-lg", CK::GroundedWye, lg),
        phasor_case("phasor-gwye-ll", CK::GroundedWye, ll),
        phasor_case("phasor-delta-ll", CK::Delta, ll),
        phasor_case("phasor-delta-lg", CK::Delta, lg),
        dynamic_case("single-phase", CK::SinglePhase, FaultKind::none(), 1),
        dynamic_case("gwye-nofault", CK::GroundedWye, FaultKind::none(), 1),
        dynamic_case("gwye-lg", CK::GroundedWye, lg, 1),
        dynamic_case("gwye-ll", CK::GroundedWye, ll, 1),
        dynamic_case("delta-nofault", CK::Delta, FaultKind::none(), 1),
        dynamic_case("delta-ll", CK::Delta, ll, 1),
        dynamic_case("delta-lg", CK::Delta, lg, 1),
    };
    for (ExperimentConfig& c : out) c.description = case_label(c);
    return out;
}

std::vector<ExperimentConfig> reference_experiments(models::Family family) {
    std::vector<ExperimentConfig> out;
    for (ExperimentConfig& c : reference_experiments())
        if (c.family == family) out.push_back(std::move(c));
    return out;
}

std::string case_label(const ExperimentConfig& c) {
    const CircuitScenario& s = c.scenario;
    if (s.conn == ConnectionKind::SinglePhase) return "Single-Phase RL Load";
    std::string label = s.conn == ConnectionKind::GroundedWye ? "Grounded-Wye " : "Delta ";
    switch (s.fault.type()) {
        case FaultKind::Type::None: return label + "No Fault";
        case FaultKind::Type::LineGround: return label + "Line-Ground Fault";
        case FaultKind::Type::LineLine: return label + "Line-Line Fault";
    }
    return label;
}

SampledWindow select_window(const SampledWindow& record, const WindowRequest& request, double f0,
                            std::vector<std::string>* warnings) {
    SampledWindow w = record;
    if (request.start) {
        const double offset = (*request.start - record.t0()) / record.dt();
        if (offset < -1e-9) throw Error(ErrorCode::WindowTooShort, "window start precedes the record");
        const auto first = static_cast<std::size_t>(std::max(0.0, std::ceil(offset - 1e-9)));
        if (first + 3 > record.size()) throw Error(ErrorCode::WindowTooShort, "window start leaves too few samples");
        w = record.slice(first, record.size() - first);
    } else if (request.t_fault) {
        return request.cycles ? select_window(select_post_fault_window(record, *request.t_fault, f0, warnings),
                                              {std::nullopt, request.cycles, std::nullopt}, f0, warnings)
                              : select_post_fault_window(record, *request.t_fault, f0, warnings);
    }
    if (request.cycles) {
        if (*request.cycles < 1) throw Error(ErrorCode::InvalidArgument, "window cycles must be >= 1");
        const auto wanted = static_cast<std::size_t>(std::llround(*request.cycles / (f0 * w.dt())));
        if (wanted > w.size()) {
            if (warnings != nullptr)
                warnings->push_back("window holds " + std::to_string(w.size()) + " samples, fewer than the " +
                                    std::to_string(*request.cycles) + " cycles requested");
        } else {
            w = w.slice(0, wanted);
        }
    }
    return w;
}

models::PhasorMeasurement phasor_truth(const ExperimentConfig& c) {
    const CircuitScenario& s = c.scenario;
    return models::to_measurement(s.conn,
                                  synthesize_phasor_measurements(s.conn, s.fault, s.load, s.vll_rms, s.omega()));
}

SampledWindow simulate_record(const ExperimentConfig& c) {
    if (c.family == models::Family::Dynamic) return simulate(c.scenario);
    return models::phasor_waveforms(phasor_truth(c), c.window.cycles.value_or(kPhasorCycles), c.scenario.dt_sample,
                                    c.scenario.f0);
}

SampledWindow noisy_record(const ExperimentConfig& c) {
    SampledWindow w = simulate_record(c);
    return c.noise.fraction > 0.0 ? inject_noise(w, c.noise.fraction, c.noise.seed) : w;
}

SampledWindow analysis_window(const ExperimentConfig& c, std::vector<std::string>* warnings) {
    if (c.family != models::Family::Dynamic)
        throw Error(ErrorCode::InvalidArgument, "analysis_window applies to dynamic experiments");
    WindowRequest request{c.window.start, c.window.cycles, std::nullopt};
    if (!request.start && c.scenario.fault.is_fault()) request.t_fault = c.scenario.t_fault;
    SampledWindow w = select_window(simulate(c.scenario), request, c.scenario.f0, warnings);
    return c.noise.fraction > 0.0 ? inject_noise(w, c.noise.fraction, c.noise.seed) : w;
}

models::PhasorMeasurement analysis_measurement(const ExperimentConfig& c) {
    if (c.family != models::Family::Phasor)
        throw Error(ErrorCode::InvalidArgument, "analysis_measurement applies to phasor experiments");
    const models::PhasorMeasurement m = phasor_truth(c);
    if (c.noise.fraction <= 0.0) return m;
    return models::noisy_measurement(m, c.noise.fraction, c.noise.seed, c.window.cycles.value_or(kPhasorCycles),
                                     c.scenario.dt_sample, c.scenario.f0);
}

HypothesisFit estimate_truth(const ExperimentConfig& c, std::vector<std::string>* warnings,
                             const SolveOptions& opts) {
    if (c.family == models::Family::Phasor)
        return fit_hypothesis(models::build_phasor_problem(c.truth(), analysis_measurement(c)), opts);
    return fit_hypothesis(
        models::build_dynamic_problem(c.truth(), analysis_window(c, warnings), std::nullopt, c.scenario.f0), opts);
}

Classification classify_experiment(const ExperimentConfig& c, const ClassifyOptions& opts) {
    if (c.family == models::Family::Phasor) return classify(analysis_measurement(c), opts);
    std::vector<std::string> warnings;
    const SampledWindow w = analysis_window(c, &warnings);
    ClassifyOptions o = opts;
    o.f0 = c.scenario.f0;
    Classification out = classify(c.scenario.conn, w, o);
    out.warnings.insert(out.warnings.begin(), warnings.begin(), warnings.end());
    return out;
}

}  // namespace dsep::cli
