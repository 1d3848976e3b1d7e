// JSON encodings: state and amplitude files, reports. Complex numbers are
// always [re, im] pairs.

#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "twocopy/protocol.hpp"
#include "twocopy/robustness.hpp"
#include "twocopy/states.hpp"

namespace twocopy {

/// Unreadable file or malformed document.
class ParseError : public Error {
public:
    using Error::Error;
};

nlohmann::json complex_to_json(Complex z);
Complex complex_from_json(const nlohmann::json& j);

nlohmann::json matrix_to_json(const CMatrix& m);
/// Rectangular array of [re, im] pairs.
CMatrix matrix_from_json(const nlohmann::json& j);

/// {"matrix": 4x4 of [re, im]} in basis order |00>, |01>, |10>, |11>.
nlohmann::json state_to_json(const TwoQubitState& rho);
/// Throws ParseError for malformed input and InvalidStateError for a
/// well-formed matrix that is not a density matrix.
TwoQubitState state_from_json(const nlohmann::json& j);

/// {"amplitudes": [a, b, c, d]} each as [re, im].
nlohmann::json amplitudes_to_json(const PureAmplitudes& psi);
PureAmplitudes amplitudes_from_json(const nlohmann::json& j);

nlohmann::json read_json_file(const std::filesystem::path& path);

nlohmann::json weak_values_to_json(const WeakValueSet& wv);

/// {"verdict", "path", "det_scaled", "det_value", "e_estimate", "weak_values"}
/// plus "probe" on the vanishing-diagonal paths.
nlohmann::json report_to_json(const DetectionReport& report);

nlohmann::json robustness_to_json(const RobustnessReport& report);

}  // namespace twocopy
