#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "dsep/models/model_id.hpp"
#include "dsep/tdsim.hpp"

namespace dsep::cli {

struct NoiseConfig {
    double fraction = 0.0;
    std::uint64_t seed = 0;
};

/// Analysis window. Without `start` the dynamic window is the post-fault
/// selection for faulted scenarios and the whole record otherwise; `cycles`
/// caps its length. Phasor scenarios synthesize `cycles` periods (default 12).
struct WindowConfig {
    std::optional<double> start;
    std::optional<int> cycles;
};

struct OutputConfig {
    std::optional<std::string> waveform;
    std::optional<std::string> report;
};

/// One experiment: circuit, noise, estimation family and analysis window.
/// Phasor experiments use the connection, fault, load, source voltage, f0 and
/// sample step of the scenario; the load may be given by reactance `x`
/// instead of inductance `l`.
struct ExperimentConfig {
    std::string name;
    std::string description;
    models::Family family = models::Family::Dynamic;
    CircuitScenario scenario;
    NoiseConfig noise;
    WindowConfig window;
    OutputConfig output;

    /// Hypothesis the scenario realizes (the circuit that generated the data).
    models::ModelId truth() const;
};

/// Errors: Error(ParseError) for malformed documents, unknown keys, wrong
/// types or unknown enum strings; scenario validation errors propagate.
ExperimentConfig parse_config(const nlohmann::ordered_json& doc);
ExperimentConfig load_config(const std::filesystem::path& path);
nlohmann::ordered_json to_json(const ExperimentConfig& config);

}  // namespace dsep::cli
