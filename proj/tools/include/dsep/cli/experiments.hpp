#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dsep/cli/config.hpp"
#include "dsep/models/phasor_models.hpp"
#include "dsep/protect.hpp"

namespace dsep::cli {

/// The twelve reference experiments in result-table row order: five phasor
/// cases, then seven dynamic cases.
std::vector<ExperimentConfig> reference_experiments();
std::vector<ExperimentConfig> reference_experiments(models::Family family);
/// Display label of the table row, e.g. "Delta Line-Line Fault".
std::string case_label(const ExperimentConfig& c);

/// Window selection. Without `start` the window opens one cycle after
/// `t_fault` when given (see select_post_fault_window), otherwise at the
/// first sample. `cycles` caps the length; a window that cannot supply the
/// requested cycles keeps what remains and logs a warning.
struct WindowRequest {
    std::optional<double> start;
    std::optional<int> cycles;
    std::optional<double> t_fault;
};
SampledWindow select_window(const SampledWindow& record, const WindowRequest& request, double f0,
                            std::vector<std::string>* warnings = nullptr);

/// Noise-free phasor snapshot of a phasor experiment.
models::PhasorMeasurement phasor_truth(const ExperimentConfig& c);

/// Noise-free record: the transient simulation for dynamic experiments, the
/// steady-state sinusoids (window.cycles periods, default 12) for phasor ones.
SampledWindow simulate_record(const ExperimentConfig& c);

/// Record with the configured noise applied over all samples.
SampledWindow noisy_record(const ExperimentConfig& c);

/// Analysis window of a dynamic experiment: the configured window, or the
/// post-fault window for faulted scenarios and the whole record otherwise.
/// Noise is added to the selected window.
SampledWindow analysis_window(const ExperimentConfig& c, std::vector<std::string>* warnings = nullptr);

/// Phasor measurement of a phasor experiment with the configured noise.
models::PhasorMeasurement analysis_measurement(const ExperimentConfig& c);

/// Fits the scenario's own hypothesis to its analysis window.
HypothesisFit estimate_truth(const ExperimentConfig& c, std::vector<std::string>* warnings = nullptr,
                             const SolveOptions& opts = {});

/// Runs the hypothesis bank of the experiment's family.
Classification classify_experiment(const ExperimentConfig& c, const ClassifyOptions& opts = {});

}  // namespace dsep::cli
