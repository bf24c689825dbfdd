#include "dsep/cli/commands.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "dsep/cli/io.hpp"
#include "dsep/cli/report.hpp"
#include "dsep/cli/waveform_csv.hpp"
#include "dsep/error.hpp"
#include "dsep/models/catalog.hpp"
#include "dsep/models/dynamic_models.hpp"

namespace dsep::cli {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

bool is_input_error(const Error& e) {
    switch (e.code()) {
        case ErrorCode::InvalidScenario:
        case ErrorCode::InvalidArgument:
        case ErrorCode::UnsupportedCombination:
        case ErrorCode::ParseError: return true;
        default: return false;
    }
}

int estimation_exit(const Error& e) {
    switch (e.code()) {
        case ErrorCode::AllFitsFailed:
        case ErrorCode::RankDeficient:
        case ErrorCode::NonFinite: return kExitEstimation;
        default: return kExitInput;
    }
}

void emit(const std::optional<std::string>& path, const std::string& text, std::ostream& out) {
    if (path)
        write_file_atomic(*path, text);
    else
        out << text;
}

SampledWindow load_window(const std::string& path, const WindowRequest& request, double f0,
                          const GlobalOptions& g, std::vector<std::string>& warnings) {
    SampledWindow w = select_window(read_waveform_csv(path), request, f0, &warnings);
    if (g.noise && *g.noise > 0.0) w = inject_noise(w, *g.noise, g.seed.value_or(0));
    return w;
}

std::string fmt(double v, int digits) {
    if (!std::isfinite(v)) return "--";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

struct TableRow {
    std::string label;
    std::array<std::optional<double>, 6> values;
};

std::string table_csv(const std::array<const char*, 7>& header, const std::vector<TableRow>& rows) {
    std::ostringstream ss;
    for (std::size_t k = 0; k < header.size(); ++k) ss << (k ? "," : "") << header[k];
    ss << '\n';
    for (const TableRow& r : rows) {
        ss << '"' << r.label << '"';
        for (const auto& v : r.values) ss << ',' << (v ? fmt(*v, 6) : "");
        ss << '\n';
    }
    return ss.str();
}

std::string table_text(const std::string& title, const std::array<const char*, 7>& header,
                       const std::vector<TableRow>& rows, const std::vector<std::string>& notes) {
    std::ostringstream ss;
    ss << title << "\n\n" << std::left << std::setw(34) << header[0];
    for (std::size_t k = 1; k < header.size(); ++k) ss << std::right << std::setw(12) << header[k];
    ss << '\n' << std::string(34 + 12 * 6, '-') << '\n';
    for (const TableRow& r : rows) {
        ss << std::left << std::setw(34) << r.label;
        for (const auto& v : r.values) ss << std::right << std::setw(12) << (v ? fmt(*v, 3) : "--");
        ss << '\n';
    }
    for (const std::string& n : notes) ss << "\nnote: " << n;
    if (!notes.empty()) ss << '\n';
    return ss.str();
}

std::string convergence_csv(const HypothesisFit& fit) {
    std::ostringstream ss;
    ss << "iteration,j,j_normalized\n";
    char buf[96];
    for (std::size_t k = 0; k < fit.j_history.size(); ++k) {
        const double j = fit.j_history[k];
        std::snprintf(buf, sizeof buf, "%zu,%.12e,%.12e\n", k, j, j / static_cast<double>(fit.dim_y));
        ss << buf;
    }
    return ss.str();
}

}  // namespace

int cmd_simulate(const std::string& config_path, const GlobalOptions& g, std::ostream& out, std::ostream& err) {
    ExperimentConfig c;
    try {
        c = load_config(config_path);
        if (g.noise) c.noise.fraction = *g.noise;
        if (g.seed) c.noise.seed = *g.seed;
        if (!(c.noise.fraction >= 0.0)) throw Error(ErrorCode::InvalidArgument, "noise must be >= 0");
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        // validation rejects a step the integrator cannot take before simulating
        return e.code() == ErrorCode::StepTooLarge ? kExitSimulation : kExitInput;
    }
    std::optional<SampledWindow> w;
    try {
        w = noisy_record(c);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return is_input_error(e) ? kExitInput : kExitSimulation;
    }
    std::ostringstream csv;
    write_waveform_csv(csv, *w);
    try {
        emit(g.out ? g.out : c.output.waveform, csv.str(), out);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitInput;
    }
    return kExitOk;
}

int cmd_classify(const ClassifyArgs& args, const GlobalOptions& g, std::ostream& out, std::ostream& err) {
    std::vector<std::string> warnings;
    std::optional<SampledWindow> w;
    try {
        w = load_window(args.waveform, args.window, args.f0, g, warnings);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitInput;
    }
    try {
        ClassifyOptions opts;
        opts.f0 = args.f0;
        Classification c = args.family == models::Family::Phasor
                               ? classify(models::measure_phasors(args.conn, *w, args.f0), opts)
                               : classify(args.conn, *w, opts);
        c.warnings.insert(c.warnings.begin(), warnings.begin(), warnings.end());
        const json report = classification_report(c, trip_decision(c, args.policy), &*w);
        emit(g.out, report.dump(2) + "\n", out);
        return kExitOk;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return estimation_exit(e);
    }
}

int cmd_estimate(const EstimateArgs& args, const GlobalOptions& g, std::ostream& out, std::ostream& err) {
    const auto id = models::parse_model_id(args.model);
    if (!id) {
        err << "error: unknown model '" << args.model << "' (see list-models)\n";
        return kExitInput;
    }
    std::vector<std::string> warnings;
    std::optional<SampledWindow> w;
    try {
        w = load_window(args.waveform, args.window, args.f0, g, warnings);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitInput;
    }
    try {
        const models::ModelProblem problem =
            id->family == models::Family::Phasor
                ? models::build_phasor_problem(*id, models::measure_phasors(id->conn, *w, args.f0))
                : models::build_dynamic_problem(*id, *w, std::nullopt, args.f0);
        const HypothesisFit fit = fit_hypothesis(problem);
        json report = to_json(fit);
        report["window"] = json{{"t0", w->t0()}, {"dt", w->dt()}, {"samples", w->size()}};
        report["warnings"] = warnings;
        emit(g.out, report.dump(2) + "\n", out);
        if (!fit.error.empty()) {
            err << "error: " << fit.error << '\n';
            return kExitEstimation;
        }
        if (!fit.converged) {
            err << "error: fit did not converge (" << to_string(fit.reason) << ")\n";
            return kExitEstimation;
        }
        return kExitOk;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return estimation_exit(e);
    }
}

int cmd_list_models(long samples, bool as_json, std::ostream& out) {
    const std::vector<models::CatalogEntry> entries = models::catalog();
    if (as_json) {
        json arr = json::array();
        for (const auto& e : entries) {
            const long n = e.id.family == models::Family::Dynamic ? samples : 1;
            arr.push_back(json{{"model", e.id.name()},
                               {"family", std::string(models::to_string(e.id.family))},
                               {"connection", std::string(to_string(e.id.conn))},
                               {"dim_y", e.dim_y.formula()},
                               {"dim_x", e.dim_x.formula()},
                               {"redundancy", e.redundancy(n)},
                               {"low_redundancy", e.warning(n)},
                               {"description", e.description}});
        }
        out << json{{"samples", samples}, {"models", arr}}.dump(2) << '\n';
        return kExitOk;
    }
    out << std::left << std::setw(12) << "model" << std::setw(9) << "family" << std::setw(10) << "dim_y"
        << std::setw(10) << "dim_x" << std::setw(13) << ("r(N=" + std::to_string(samples) + ")") << "description\n";
    for (const auto& e : entries) {
        const long n = e.id.family == models::Family::Dynamic ? samples : 1;
        std::string r = fmt(e.redundancy(n), 3);
        if (e.warning(n)) r += " !";
        out << std::left << std::setw(12) << e.id.name() << std::setw(9) << models::to_string(e.id.family)
            << std::setw(10) << e.dim_y.formula() << std::setw(10) << e.dim_x.formula() << std::setw(13) << r
            << e.description << '\n';
    }
    out << "\n! redundancy below " << kRedundancyTarget << '\n';
    return kExitOk;
}

int cmd_reproduce_tables(const GlobalOptions& g, std::ostream& out, std::ostream& err) {
    const fs::path dir = g.out.value_or("results");
    std::vector<TableRow> phasor_rows;
    std::vector<TableRow> dynamic_rows;
    std::vector<std::string> phasor_notes;
    std::vector<std::string> dynamic_notes;
    for (ExperimentConfig c : reference_experiments()) {
        if (g.noise) c.noise.fraction = *g.noise;
        if (g.seed) c.noise.seed = *g.seed;
        const bool phasor = c.family == models::Family::Phasor;
        auto& notes = phasor ? phasor_notes : dynamic_notes;
        HypothesisFit fit;
        try {
            std::vector<std::string> warnings;
            fit = estimate_truth(c, &warnings);
            for (const std::string& w : warnings) notes.push_back(c.name + ": " + w);
        } catch (const Error& e) {
            err << "error: " << c.name << ": " << e.what() << '\n';
            return kExitSimulation;
        }
        if (!fit.error.empty() || !fit.estimates) {
            err << "error: " << c.name << ": " << fit.error << '\n';
            return kExitSimulation;
        }
        if (!fit.converged) notes.push_back(c.name + ": fit stopped on " + std::string(to_string(fit.reason)));

        const LoadParams& p = c.scenario.load;
        const models::Estimates& e = *fit.estimates;
        const double w = c.scenario.omega();
        TableRow row{case_label(c), {}};
        const double rf_scale = phasor ? 1.0 : 1e3;
        row.values[0] = p.r;
        row.values[1] = e.r;
        row.values[2] = phasor ? p.l * w : p.l * 1e3;
        row.values[3] = phasor ? e.x : e.l * 1e3;
        if (c.scenario.fault.is_fault()) {
            // dynamic models see the whole fault path: R_f + R_g line-ground, 2 R_f line-line
            double rf = *p.rf;
            if (!phasor)
                rf = c.scenario.fault.type() == FaultKind::Type::LineGround ? rf + c.scenario.rg : 2.0 * rf;
            row.values[4] = rf * rf_scale;
            if (e.rf) row.values[5] = *e.rf * rf_scale;
        }
        (phasor ? phasor_rows : dynamic_rows).push_back(row);
        write_file_atomic(dir / "convergence" / (c.name + ".csv"), convergence_csv(fit));
        out << c.name << ": " << fit.id.name() << ", " << fit.iters << " iterations\n";
    }

    const std::array<const char*, 7> ph{"case", "R_ohm", "R_hat_ohm", "X_ohm", "X_hat_ohm", "Rf_ohm", "Rf_hat_ohm"};
    const std::array<const char*, 7> dh{"case", "R_ohm", "R_hat_ohm", "L_mH", "L_hat_mH", "Rf_mohm", "Rf_hat_mohm"};
    const std::array<const char*, 7> pt{"Case", "R", "R^", "X", "X^", "R_f", "R^_f"};
    const std::array<const char*, 7> dt{"Case", "R (ohm)", "R^ (ohm)", "L (mH)", "L^ (mH)", "R_f (mohm)", "R^_f (mohm)"};
    write_file_atomic(dir / "phasor_results.csv", table_csv(ph, phasor_rows));
    write_file_atomic(dir / "dynamic_results.csv", table_csv(dh, dynamic_rows));
    write_file_atomic(dir / "phasor_results.txt",
                      table_text("Results for phasor state estimation", pt, phasor_rows, phasor_notes));
    write_file_atomic(dir / "dynamic_results.txt",
                      table_text("Results for dynamic state estimation", dt, dynamic_rows, dynamic_notes));
    out << "tables written to " << dir.string() << '\n';
    return kExitOk;
}

}  // namespace dsep::cli
