#include "twocopy/cli.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <vector>

#include "parallel.hpp"
#include "twocopy/circuit.hpp"
#include "twocopy/io.hpp"
#include "twocopy/pointer.hpp"
#include "twocopy/protocol.hpp"
#include "twocopy/robustness.hpp"
#include "twocopy/states.hpp"

namespace twocopy::cli {

using nlohmann::json;

namespace {

constexpr std::array<std::pair<Command, std::string_view>, 8> kCommandNames{{
    {Command::Validate, "validate"},
    {Command::Detect, "detect"},
    {Command::DetectPure, "detect-pure"},
    {Command::Tomo, "tomo"},
    {Command::PointerSim, "pointer-sim"},
    {Command::CircuitVerify, "circuit-verify"},
    {Command::Robustness, "robustness"},
    {Command::Benchmark, "benchmark"},
}};

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<json>> rows;
};

struct CommandOutput {
    json doc;
    std::optional<Table> table;
    int exit_code = kExitOk;
};

const std::string& require_input(const RunConfig& cfg) {
    if (!cfg.input_path) {
        throw ConfigError(std::string(command_name(cfg.command)) + " requires --input PATH");
    }
    return *cfg.input_path;
}

Tolerances tolerances(const RunConfig& cfg) {
    Tolerances tol;
    if (cfg.tol_det) {
        if (!(*cfg.tol_det > 0.0)) throw ConfigError("--tol-det must be positive");
        tol.det = *cfg.tol_det;
    }
    return tol;
}

SimConfig sim_config(const RunConfig& cfg, double epsilon) {
    SimConfig sim{epsilon, cfg.sigma, cfg.grid_n, cfg.grid_l};
    sim.validate();
    return sim;
}

TwoQubitState load_state(const RunConfig& cfg) { return state_from_json(read_json_file(require_input(cfg))); }

CommandOutput run_validate(const RunConfig& cfg) {
    const json file = read_json_file(require_input(cfg));
    CommandOutput result;
    try {
        const TwoQubitState rho = state_from_json(file);
        result.doc = {
            {"valid", true},
            {"diagonal", {rho.p(), rho.q(), rho.r(), rho.s()}},
            {"trace", rho.matrix().trace().real()},
            {"min_eigenvalue", hermitian_eigen(rho.matrix()).values.front()},
        };
    } catch (const InvalidStateError& e) {
        result.doc = {{"valid", false}, {"error", to_string(e.kind())}, {"message", e.what()}};
        result.exit_code = kExitInvalidState;
    }
    return result;
}

CommandOutput run_detect(const RunConfig& cfg) {
    const Tolerances tol = tolerances(cfg);
    const TwoQubitState rho = load_state(cfg);
    const DetectionReport report = detect(rho, tol);
    const double det_lu = det_ptb(rho);
    const Verdict oracle = ppt_oracle(rho, tol.det);

    CommandOutput result;
    result.doc = report_to_json(report);
    result.doc["oracle"] = {
        {"verdict", std::string(to_string(oracle))},
        {"det_ptb", det_lu},
        {"negativity", negativity(rho)},
    };
    const bool agrees = oracle == report.verdict;
    result.doc["agrees"] = agrees;
    if (!agrees && std::abs(det_lu) > tol.det) result.exit_code = kExitInternal;
    return result;
}

CommandOutput run_detect_pure(const RunConfig& cfg) {
    const Tolerances tol = tolerances(cfg);
    const PureAmplitudes psi = amplitudes_from_json(read_json_file(require_input(cfg)));
    const DetectionReport report = detect_pure_local(psi, tol);
    const double minor = std::abs(psi.separability_minor());
    const Verdict oracle = minor > tol.weak_value ? Verdict::Entangled : Verdict::Separable;

    CommandOutput result;
    result.doc = report_to_json(report);
    result.doc["oracle"] = {{"verdict", std::string(to_string(oracle))}, {"minor_abs", minor}};
    result.doc["agrees"] = oracle == report.verdict;
    if (oracle != report.verdict) result.exit_code = kExitInternal;
    return result;
}

CommandOutput run_tomo(const RunConfig& cfg) {
    const TwoQubitState rho = load_state(cfg);
    const WeakValueSet wv = weak_values_all(rho);
    const Diagonals diag = diagonals_from_postselection(rho);
    const TwoQubitState rebuilt = reconstruct(wv, diag);

    CommandOutput result;
    result.doc = {
        {"trace_distance", trace_distance(rho, rebuilt)},
        {"defined_outcomes", wv.defined_count()},
        {"diagonals", {diag.p, diag.q, diag.r, diag.s}},
        {"reconstructed", state_to_json(rebuilt)},
    };
    try {
        const Diagonals chain = diagonals_from_ratio_chain(wv);
        const double gap = std::max({std::abs(chain.p - diag.p), std::abs(chain.q - diag.q),
                                     std::abs(chain.r - diag.r), std::abs(chain.s - diag.s)});
        result.doc["ratio_chain"] = {{"diagonals", {chain.p, chain.q, chain.r, chain.s}},
                                     {"max_abs_diff", gap}};
    } catch (const Error&) {
        result.doc["ratio_chain"] = nullptr;
    }
    return result;
}

CommandOutput run_pointer_sim(const RunConfig& cfg) {
    const TwoQubitState rho = load_state(cfg);
    const SimConfig full = sim_config(cfg, cfg.epsilon);
    const SimConfig half = sim_config(cfg, cfg.epsilon / 2.0);
    if (!(cfg.epsilon > 0.0)) throw ConfigError("pointer-sim needs --epsilon > 0");
    const WeakValueSet exact = weak_values_all(rho);
    const auto readouts = estimate_weak_values(rho, full);
    const auto readouts_half = estimate_weak_values(rho, half);

    CommandOutput result;
    Table table{{"k", "exact_re", "exact_im", "estimate_re", "estimate_im", "error", "error_half",
                 "postselect_prob"},
                {}};
    json outcomes = json::array();
    double max_error = 0.0, max_error_half = 0.0;
    for (std::size_t i = 0; i < readouts.size(); ++i) {
        const WeakReadout& r = readouts[i];
        const auto truth = exact.get(r.k);
        if (!truth) continue;
        const double err = std::abs(r.estimate - *truth);
        const double err_half = std::abs(readouts_half[i].estimate - *truth);
        max_error = std::max(max_error, err);
        max_error_half = std::max(max_error_half, err_half);
        outcomes.push_back({{"k", r.k.k()},
                            {"exact", complex_to_json(*truth)},
                            {"estimate", complex_to_json(r.estimate)},
                            {"error", err},
                            {"error_half", err_half},
                            {"postselect_prob", r.postselect_prob}});
        table.rows.push_back({r.k.k(), truth->real(), truth->imag(), r.estimate.real(),
                              r.estimate.imag(), err, err_half, r.postselect_prob});
    }
    const DetectionReport from_pointer =
        decide(to_weak_value_set(readouts), diagonals_from_postselection(rho), tolerances(cfg));
    result.doc = {
        {"epsilon", cfg.epsilon},
        {"sigma", cfg.sigma},
        {"grid_n", cfg.grid_n},
        {"grid_l", cfg.grid_l},
        {"max_error", max_error},
        {"max_error_half", max_error_half},
        {"convergence_ratio", max_error_half > 0.0 ? json(max_error / max_error_half) : json(nullptr)},
        {"outcomes", outcomes},
        {"pointer_verdict", std::string(to_string(from_pointer.verdict))},
        {"exact_verdict", std::string(to_string(detect(rho).verdict))},
    };
    result.table = std::move(table);
    return result;
}

CommandOutput run_circuit_verify(const RunConfig&) {
    constexpr std::array<double, 5> kGrid{1e-3, 1e-2, 0.1, 0.5, 1.0};
    const WeakHamiltonian h = build_hamiltonian();
    CommandOutput result;
    Table table{{"epsilon", "circuit_deviation", "expm_deviation"}, {}};
    json rows = json::array();
    double worst = 0.0;
    for (double eps : kGrid) {
        const double circuit_dev = verify_equivalence(eps);
        const double expm_dev = max_abs_diff(coupling_unitary(eps), expm_hermitian(h.matrix, Complex{0.0, -eps}));
        worst = std::max({worst, circuit_dev, expm_dev});
        rows.push_back({{"epsilon", eps}, {"circuit_deviation", circuit_dev}, {"expm_deviation", expm_dev}});
        table.rows.push_back({eps, circuit_dev, expm_dev});
    }
    std::ostringstream gates;
    print_circuit(gates, build_coupling_circuit(0.0));
    json gate_lines = json::array();
    std::string line;
    std::istringstream lines(gates.str());
    while (std::getline(lines, line)) gate_lines.push_back(line);

    result.doc = {{"max_deviation", worst}, {"grid", rows}, {"gates", gate_lines}};
    result.table = std::move(table);
    if (worst > 1e-12) result.exit_code = kExitInternal;
    return result;
}

CommandOutput run_robustness(const RunConfig& cfg) {
    const TwoQubitState rho = cfg.input_path ? load_state(cfg) : random_mixed(cfg.seed);
    const RobustnessReport report = bound_check(rho, cfg.delta, cfg.trials, cfg.seed);

    // Miscalibrated coupling with the same trace-norm budget.
    const WeakHamiltonian h = build_hamiltonian();
    const Perturbation scaled = miscalibration_perturbation(h, cfg.delta / 16.0);
    double scaled_worst = 0.0;
    for (int k = 1; k <= 16; ++k) {
        if (!report.worst_deviation[static_cast<std::size_t>(k - 1)]) continue;
        scaled_worst = std::max(scaled_worst, weak_value_deviation(rho, h, scaled, OutcomeIndex(k)));
    }

    CommandOutput result;
    result.doc = robustness_to_json(report);
    result.doc["miscalibration"] = {{"eta", cfg.delta / 16.0},
                                    {"delta", scaled.delta},
                                    {"max_deviation", scaled_worst},
                                    {"within_bound", scaled_worst <= scaled.delta / report.m}};
    Table table{{"delta", "k", "deviation", "bound"}, {}};
    for (int k = 1; k <= 16; ++k) {
        if (const auto& d = report.worst_deviation[static_cast<std::size_t>(k - 1)]) {
            table.rows.push_back({report.delta, k, *d, report.bound});
        }
    }
    result.table = std::move(table);
    if (report.violations > 0 || scaled_worst > scaled.delta / report.m) {
        result.exit_code = kExitInternal;
    }
    return result;
}

struct BenchmarkSample {
    Verdict detected = Verdict::Separable;
    Verdict oracle = Verdict::Separable;
    double det = 0.0;
    double trace_distance = 0.0;
    double expansion_rel_error = 0.0;
    double identity_residual = 0.0;
};

CommandOutput run_benchmark(const RunConfig& cfg) {
    if (cfg.trials < 1) throw ConfigError("--trials must be positive");
    const Tolerances tol = tolerances(cfg);
    std::vector<BenchmarkSample> samples(static_cast<std::size_t>(cfg.trials));
    parallel_for(samples.size(), [&](std::size_t i) {
        const TwoQubitState rho = random_mixed(derive_seed(cfg.seed, i));
        BenchmarkSample& s = samples[i];
        const DetectionReport report = detect(rho, tol);
        s.detected = report.verdict;
        s.oracle = ppt_oracle(rho, tol.det);
        s.det = det_ptb(rho);
        s.trace_distance = trace_distance(rho, reconstruct(report.weak_values, diagonals_from_postselection(rho)));
        s.expansion_rel_error = std::abs(det_ptb_expansion(rho) - s.det) / std::abs(s.det);
        s.identity_residual = max_identity_residual(rho, report.weak_values);
    });

    std::array<std::array<long, 2>, 2> matrix{};  // [detected][oracle], 0 = Entangled
    long mismatches = 0, near_threshold = 0;
    double max_td = 0.0, sum_td = 0.0, max_expansion = 0.0, max_identity = 0.0;
    for (const BenchmarkSample& s : samples) {
        matrix[s.detected == Verdict::Entangled ? 0 : 1][s.oracle == Verdict::Entangled ? 0 : 1]++;
        if (std::abs(s.det) <= tol.det) {
            ++near_threshold;
        } else if (s.detected != s.oracle) {
            ++mismatches;
        }
        max_td = std::max(max_td, s.trace_distance);
        sum_td += s.trace_distance;
        max_expansion = std::max(max_expansion, s.expansion_rel_error);
        max_identity = std::max(max_identity, s.identity_residual);
    }
    auto row = [&](int i) { return json{{"Entangled", matrix[i][0]}, {"Separable", matrix[i][1]}}; };

    CommandOutput result;
    result.doc = {
        {"trials", cfg.trials},
        {"seed", cfg.seed},
        {"agreement_matrix", {{"Entangled", row(0)}, {"Separable", row(1)}}},
        {"agreements", matrix[0][0] + matrix[1][1]},
        {"mismatches", mismatches},
        {"near_threshold", near_threshold},
        {"reconstruction", {{"max_trace_distance", max_td},
                            {"mean_trace_distance", sum_td / static_cast<double>(samples.size())}}},
        {"max_expansion_rel_error", max_expansion},
        {"max_identity_residual", max_identity},
    };
    if (mismatches > 0 || max_td > 1e-8) result.exit_code = kExitInternal;
    return result;
}

CommandOutput dispatch(const RunConfig& cfg) {
    switch (cfg.command) {
        case Command::Validate: return run_validate(cfg);
        case Command::Detect: return run_detect(cfg);
        case Command::DetectPure: return run_detect_pure(cfg);
        case Command::Tomo: return run_tomo(cfg);
        case Command::PointerSim: return run_pointer_sim(cfg);
        case Command::CircuitVerify: return run_circuit_verify(cfg);
        case Command::Robustness: return run_robustness(cfg);
        case Command::Benchmark: return run_benchmark(cfg);
    }
    throw ConfigError("unknown command");
}

std::string scalar_text(const json& value) {
    return value.is_string() ? value.get<std::string>() : value.dump();
}

void render_text(std::ostream& out, const json& value, int indent) {
    const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
    if (value.is_object()) {
        for (const auto& [key, item] : value.items()) {
            const bool nested = item.is_object() || (item.is_array() && !item.empty() && item[0].is_structured() &&
                                                     !(item[0].is_array() && item[0].size() == 2 && item[0][0].is_number()));
            if (nested) {
                out << pad << key << ":\n";
                render_text(out, item, indent + 1);
            } else {
                out << pad << key << ": " << scalar_text(item) << '\n';
            }
        }
    } else if (value.is_array()) {
        for (std::size_t i = 0; i < value.size(); ++i) {
            if (value[i].is_structured()) {
                out << pad << "- [" << i << "]\n";
                render_text(out, value[i], indent + 1);
            } else {
                out << pad << "- " << scalar_text(value[i]) << '\n';
            }
        }
    } else {
        out << pad << scalar_text(value) << '\n';
    }
}

void flatten_csv(std::ostream& out, const json& value, const std::string& prefix) {
    if (value.is_object()) {
        for (const auto& [key, item] : value.items()) {
            flatten_csv(out, item, prefix.empty() ? key : prefix + "." + key);
        }
    } else if (value.is_array()) {
        for (std::size_t i = 0; i < value.size(); ++i) {
            flatten_csv(out, value[i], prefix + "." + std::to_string(i));
        }
    } else {
        out << prefix << ',' << scalar_text(value) << '\n';
    }
}

void render(std::ostream& out, const CommandOutput& result, OutputFormat format) {
    switch (format) {
        case OutputFormat::Json:
            out << result.doc.dump(2) << '\n';
            break;
        case OutputFormat::Text:
            render_text(out, result.doc, 0);
            break;
        case OutputFormat::Csv:
            if (result.table) {
                for (std::size_t i = 0; i < result.table->header.size(); ++i) {
                    out << (i ? "," : "") << result.table->header[i];
                }
                out << '\n';
                for (const auto& row : result.table->rows) {
                    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << scalar_text(row[i]);
                    out << '\n';
                }
            } else {
                out << "key,value\n";
                flatten_csv(out, result.doc, "");
            }
            break;
    }
}

}  // namespace

std::optional<Command> parse_command(std::string_view name) {
    for (const auto& [command, text] : kCommandNames) {
        if (text == name) return command;
    }
    return std::nullopt;
}

std::string_view command_name(Command command) {
    for (const auto& [cmd, text] : kCommandNames) {
        if (cmd == command) return text;
    }
    return "unknown";
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        CommandOutput result = dispatch(cfg);
        result.doc = json{{"command", std::string(command_name(cfg.command))}, {"result", result.doc}};
        render(out, result, cfg.format);
        return result.exit_code;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitIo;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return kExitIo;
    } catch (const InvalidStateError& e) {
        err << "invalid state (" << to_string(e.kind()) << "): " << e.what() << '\n';
        return kExitInvalidState;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kExitInternal;
    }
}

}  // namespace twocopy::cli
