#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "dsep/cli/commands.hpp"
#include "dsep/error.hpp"

namespace {

using namespace dsep;

struct WindowFlags {
    std::optional<double> start;
    std::optional<int> cycles;
    std::optional<double> t_fault;

    void attach(CLI::App* cmd) {
        cmd->add_option("--start", start, "Window start time, s");
        cmd->add_option("--cycles", cycles, "Window length in fundamental cycles")->check(CLI::PositiveNumber);
        cmd->add_option("--t-fault", t_fault, "Fault inception time; selects the post-fault window, s");
    }
    cli::WindowRequest request() const { return {start, cycles, t_fault}; }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dynamic state estimation based fault identification"};
    app.require_subcommand(1);
    app.fallthrough();

    cli::GlobalOptions global;
    app.add_option("--seed", global.seed, "Noise seed");
    app.add_option("--noise", global.noise, "Uniform noise as a fraction of each channel's peak")
        ->check(CLI::NonNegativeNumber);
    app.add_option("--out", global.out, "Output file (directory for reproduce-tables)");

    std::string config_path;
    auto* simulate = app.add_subcommand("simulate", "Simulate a scenario config to a waveform CSV");
    simulate->add_option("config", config_path, "Scenario config (JSON)")->required();

    cli::ClassifyArgs classify_args;
    WindowFlags classify_window;
    std::string conn_text;
    std::string family_text = "dynamic";
    auto* classify = app.add_subcommand("classify", "Fit the hypothesis bank to a waveform and rank it");
    classify->add_option("waveform", classify_args.waveform, "Waveform CSV")->required();
    classify->add_option("--conn", conn_text, "Load connection: single-phase, gwye or delta")->required();
    classify->add_option("--family", family_text, "Model family: dynamic or phasor")->capture_default_str();
    classify->add_option("--f0", classify_args.f0, "Fundamental frequency, Hz")->capture_default_str();
    classify->add_option("--margin-min", classify_args.policy.margin_min, "Trip margin threshold")->capture_default_str();
    classify_window.attach(classify);

    cli::EstimateArgs estimate_args;
    WindowFlags estimate_window;
    auto* estimate = app.add_subcommand("estimate", "Fit one named model to a waveform");
    estimate->add_option("waveform", estimate_args.waveform, "Waveform CSV")->required();
    estimate->add_option("--model", estimate_args.model, "Model name, see list-models")->required();
    estimate->add_option("--f0", estimate_args.f0, "Fundamental frequency, Hz")->capture_default_str();
    estimate_window.attach(estimate);

    long samples = 400;
    bool as_json = false;
    auto* list = app.add_subcommand("list-models", "Print the model catalog");
    list->add_option("--samples", samples, "Window length N for redundancy ratios")->capture_default_str()
        ->check(CLI::PositiveNumber);
    list->add_flag("--json", as_json, "JSON output");

    auto* reproduce = app.add_subcommand("reproduce-tables", "Run the reference experiments and write result tables");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return cli::kExitInput;
    }

    try {
        if (simulate->parsed()) return cli::cmd_simulate(config_path, global, std::cout, std::cerr);
        if (classify->parsed()) {
            const auto conn = parse_connection(conn_text);
            const auto family = models::parse_family(family_text);
            if (!conn || !family) {
                std::cerr << "error: bad --conn or --family\n";
                return cli::kExitInput;
            }
            classify_args.conn = *conn;
            classify_args.family = *family;
            classify_args.window = classify_window.request();
            return cli::cmd_classify(classify_args, global, std::cout, std::cerr);
        }
        if (estimate->parsed()) {
            estimate_args.window = estimate_window.request();
            return cli::cmd_estimate(estimate_args, global, std::cout, std::cerr);
        }
        if (list->parsed()) return cli::cmd_list_models(samples, as_json, std::cout);
        if (reproduce->parsed()) return cli::cmd_reproduce_tables(global, std::cout, std::cerr);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return cli::kExitInput;
    }
    return cli::kExitInput;
}
