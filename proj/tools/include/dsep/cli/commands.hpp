#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "dsep/cli/experiments.hpp"

namespace dsep::cli {

enum ExitCode : int { kExitOk = 0, kExitInput = 2, kExitSimulation = 3, kExitEstimation = 4 };

struct GlobalOptions {
    std::optional<std::uint64_t> seed;
    std::optional<double> noise;
    std::optional<std::string> out;
};

/// Config -> waveform CSV (to --out, the config's output.waveform, or `out`).
/// Noise from the config or the global flags is applied to the whole record.
int cmd_simulate(const std::string& config_path, const GlobalOptions& g, std::ostream& out, std::ostream& err);

struct ClassifyArgs {
    std::string waveform;
    ConnectionKind conn = ConnectionKind::GroundedWye;
    models::Family family = models::Family::Dynamic;
    WindowRequest window;
    double f0 = kNominalFrequency;
    TripPolicy policy;
};
/// Waveform CSV -> classification report JSON. Global noise is added to the
/// selected window.
int cmd_classify(const ClassifyArgs& args, const GlobalOptions& g, std::ostream& out, std::ostream& err);

struct EstimateArgs {
    std::string waveform;
    std::string model;
    WindowRequest window;
    double f0 = kNominalFrequency;
};
/// Fits one named model; exit 4 when the fit fails or does not converge (the
/// report is still written).
int cmd_estimate(const EstimateArgs& args, const GlobalOptions& g, std::ostream& out, std::ostream& err);

/// Catalog table (or JSON) with redundancy at `samples` samples.
int cmd_list_models(long samples, bool as_json, std::ostream& out);

/// Runs the reference experiments and writes phasor_results.{csv,txt},
/// dynamic_results.{csv,txt} and convergence/<case>.csv under --out
/// (default "results"). Global noise and seed replace every experiment's.
int cmd_reproduce_tables(const GlobalOptions& g, std::ostream& out, std::ostream& err);

}  // namespace dsep::cli
