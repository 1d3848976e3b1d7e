#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "twocopy/cli.hpp"

namespace {

using twocopy::cli::Command;
using twocopy::cli::OutputFormat;
using twocopy::cli::RunConfig;

void add_common(CLI::App* sub, RunConfig& cfg, std::string& format) {
    sub->add_option("--format", format, "Output format")
        ->check(CLI::IsMember({"json", "text", "csv"}))
        ->capture_default_str();
    sub->add_option("--tol-det", cfg.tol_det, "Determinant threshold");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-copy weak-value entanglement detection for two qubits"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string format = "json";
    std::string input;

    const std::map<Command, std::string> help{
        {Command::Validate, "Check that a file holds a density matrix"},
        {Command::Detect, "Run the weak-value test on a mixed state"},
        {Command::DetectPure, "Run the single-copy test on pure amplitudes"},
        {Command::Tomo, "Rebuild the state from weak values"},
        {Command::PointerSim, "Simulate the pointer readout at epsilon and epsilon/2"},
        {Command::CircuitVerify, "Compare the gate circuit with the exact evolution"},
        {Command::Robustness, "Sample Hamiltonian perturbations against the deviation bound"},
        {Command::Benchmark, "Compare the test against the partial-transpose oracle on random states"},
    };

    std::map<CLI::App*, Command> subs;
    for (const auto& [command, text] : help) {
        CLI::App* sub = app.add_subcommand(std::string(twocopy::cli::command_name(command)), text);
        subs[sub] = command;
        add_common(sub, cfg, format);
        switch (command) {
            case Command::Validate:
            case Command::Detect:
            case Command::DetectPure:
            case Command::Tomo:
                sub->add_option("--input", input, "JSON input file")->required();
                break;
            case Command::PointerSim:
                sub->add_option("--input", input, "State JSON file")->required();
                sub->add_option("--epsilon", cfg.epsilon, "Coupling strength")->capture_default_str();
                sub->add_option("--sigma", cfg.sigma, "Pointer width")->capture_default_str();
                sub->add_option("--grid-n", cfg.grid_n, "Grid points (power of two)")->capture_default_str();
                sub->add_option("--grid-l", cfg.grid_l, "Grid length")->capture_default_str();
                break;
            case Command::CircuitVerify:
                break;
            case Command::Robustness:
                sub->add_option("--input", input, "State JSON file (random state if omitted)");
                sub->add_option("--delta", cfg.delta, "Perturbation trace norm")->capture_default_str();
                sub->add_option("--trials", cfg.trials, "Perturbations to sample")->capture_default_str();
                sub->add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
                break;
            case Command::Benchmark:
                sub->add_option("--trials", cfg.trials, "Random states")->capture_default_str();
                sub->add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
                break;
        }
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return twocopy::cli::kExitIo;
    }

    for (const auto& [sub, command] : subs) {
        if (sub->parsed()) cfg.command = command;
    }
    if (!input.empty()) cfg.input_path = input;
    if (format == "text") cfg.format = OutputFormat::Text;
    if (format == "csv") cfg.format = OutputFormat::Csv;

    return twocopy::cli::run(cfg, std::cout, std::cerr);
}
