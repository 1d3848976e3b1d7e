#include "twocopy/io.hpp"

#include <cmath>
#include <fstream>

namespace twocopy {

using nlohmann::json;

namespace {

json optional_number(const std::optional<double>& value) {
    return value ? json(*value) : json(nullptr);
}

}  // namespace

json complex_to_json(Complex z) { return json::array({z.real(), z.imag()}); }

Complex complex_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        throw ParseError("complex number must be a [re, im] pair of numbers");
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

json matrix_to_json(const CMatrix& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t k = 0; k < m.cols(); ++k) row.push_back(complex_to_json(m(i, k)));
        rows.push_back(std::move(row));
    }
    return rows;
}

CMatrix matrix_from_json(const json& j) {
    if (!j.is_array() || j.empty()) throw ParseError("matrix must be a non-empty array of rows");
    const std::size_t rows = j.size();
    if (!j[0].is_array() || j[0].empty()) throw ParseError("matrix rows must be non-empty arrays");
    const std::size_t cols = j[0].size();
    std::vector<Complex> entries;
    entries.reserve(rows * cols);
    for (const json& row : j) {
        if (!row.is_array() || row.size() != cols) throw ParseError("matrix rows must have equal length");
        for (const json& entry : row) entries.push_back(complex_from_json(entry));
    }
    try {
        return CMatrix(rows, cols, std::move(entries));
    } catch (const NonFiniteError& e) {
        throw ParseError(e.what());
    }
}

json state_to_json(const TwoQubitState& rho) { return json{{"matrix", matrix_to_json(rho.matrix())}}; }

TwoQubitState state_from_json(const json& j) {
    if (!j.is_object() || !j.contains("matrix")) throw ParseError("state file needs a \"matrix\" field");
    return TwoQubitState::validate(matrix_from_json(j.at("matrix")));
}

json amplitudes_to_json(const PureAmplitudes& psi) {
    json amps = json::array();
    for (const Complex& a : psi.as_array()) amps.push_back(complex_to_json(a));
    return json{{"amplitudes", amps}};
}

PureAmplitudes amplitudes_from_json(const json& j) {
    if (!j.is_object() || !j.contains("amplitudes")) {
        throw ParseError("amplitude file needs an \"amplitudes\" field");
    }
    const json& amps = j.at("amplitudes");
    if (!amps.is_array() || amps.size() != 4) throw ParseError("\"amplitudes\" must hold four entries");
    std::array<Complex, 4> values;
    for (std::size_t i = 0; i < 4; ++i) {
        values[i] = complex_from_json(amps[i]);
        if (!std::isfinite(values[i].real()) || !std::isfinite(values[i].imag())) {
            throw ParseError("amplitude is not finite");
        }
    }
    return PureAmplitudes::make(values[0], values[1], values[2], values[3]);
}

json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path.string());
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw ParseError("malformed JSON in " + path.string() + ": " + e.what());
    }
}

json weak_values_to_json(const WeakValueSet& wv) {
    json out = json::object();
    for (int k = 1; k <= 16; ++k) {
        if (const auto value = wv.get(k)) out[std::to_string(k)] = complex_to_json(*value);
    }
    return out;
}

json report_to_json(const DetectionReport& report) {
    json out{
        {"verdict", std::string(to_string(report.verdict))},
        {"path", std::string(to_string(report.path))},
        {"det_scaled", optional_number(report.det_scaled)},
        {"det_value", optional_number(report.det_value)},
        {"e_estimate", report.e_estimate},
        {"weak_values", weak_values_to_json(report.weak_values)},
    };
    if (report.probe_outcome) {
        out["probe"] = json{{"outcome", *report.probe_outcome},
                            {"hamiltonian", std::string(to_string(*report.probe_hamiltonian))}};
    }
    return out;
}

json robustness_to_json(const RobustnessReport& report) {
    json deviations = json::object();
    for (int k = 1; k <= 16; ++k) {
        if (const auto& d = report.worst_deviation[static_cast<std::size_t>(k - 1)]) {
            deviations[std::to_string(k)] = *d;
        }
    }
    return json{
        {"delta", report.delta},
        {"m", report.m},
        {"bound", report.bound},
        {"trials", report.trials},
        {"checks", report.checks},
        {"violations", report.violations},
        {"margin", report.margin},
        {"worst_deviation", deviations},
    };
}

}  // namespace twocopy
