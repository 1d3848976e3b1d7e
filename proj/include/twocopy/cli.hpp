// Command dispatch behind the twocopy executable.

#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>

namespace twocopy::cli {

enum class Command { Validate, Detect, DetectPure, Tomo, PointerSim, CircuitVerify, Robustness, Benchmark };
enum class OutputFormat { Json, Text, Csv };

std::optional<Command> parse_command(std::string_view name);
std::string_view command_name(Command command);

enum ExitCode : int {
    kExitOk = 0,
    kExitIo = 1,
    kExitInvalidState = 2,
    kExitInternal = 3,
};

struct RunConfig {
    Command command = Command::Detect;
    std::optional<std::string> input_path;
    double epsilon = 1e-3;
    double sigma = 1.0;
    std::size_t grid_n = 4096;
    double grid_l = 40.0;
    std::uint64_t seed = 0;
    int trials = 1000;
    double delta = 1e-2;
    std::optional<double> tol_det;
    OutputFormat format = OutputFormat::Json;
};

/// Executes one command, writing the report to `out` and diagnostics to
/// `err`. Never throws; every failure maps to an ExitCode.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace twocopy::cli
