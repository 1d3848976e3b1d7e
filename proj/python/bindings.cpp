#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "twocopy/circuit.hpp"
#include "twocopy/pointer.hpp"
#include "twocopy/protocol.hpp"
#include "twocopy/robustness.hpp"
#include "twocopy/states.hpp"

namespace py = pybind11;
using namespace twocopy;

namespace {

using ComplexArray = py::array_t<Complex, py::array::c_style | py::array::forcecast>;

CMatrix to_cmatrix(const ComplexArray& array) {
    if (array.ndim() != 2) throw DimensionError("expected a two-dimensional array");
    const auto rows = static_cast<std::size_t>(array.shape(0));
    const auto cols = static_cast<std::size_t>(array.shape(1));
    std::vector<Complex> entries(array.data(), array.data() + rows * cols);
    return CMatrix(rows, cols, std::move(entries));
}

ComplexArray to_numpy(const CMatrix& m) {
    ComplexArray out({m.rows(), m.cols()});
    std::copy(m.data().begin(), m.data().end(), out.mutable_data());
    return out;
}

py::dict weak_value_dict(const WeakValueSet& wv) {
    py::dict out;
    for (int k = 1; k <= 16; ++k) {
        if (const auto value = wv.get(k)) out[py::int_(k)] = *value;
    }
    return out;
}

py::dict report_dict(const DetectionReport& report) {
    py::dict out;
    out["verdict"] = std::string(to_string(report.verdict));
    out["path"] = std::string(to_string(report.path));
    out["det_scaled"] = report.det_scaled;
    out["det_value"] = report.det_value;
    out["e_estimate"] = report.e_estimate;
    out["weak_values"] = weak_value_dict(report.weak_values);
    out["probe_outcome"] = report.probe_outcome;
    return out;
}

Tolerances tolerances(std::optional<double> tol_det) {
    Tolerances tol;
    if (tol_det) tol.det = *tol_det;
    return tol;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Two-copy weak-value entanglement detection for two-qubit states";

    auto base = py::register_exception<Error>(m, "TwoCopyError", PyExc_RuntimeError);
    py::register_exception<InvalidStateError>(m, "InvalidStateError", base.ptr());
    py::register_exception<NoSignalError>(m, "NoSignalError", base.ptr());
    py::register_exception<DimensionError>(m, "DimensionError", base.ptr());
    py::register_exception<ConfigError>(m, "ConfigError", base.ptr());

    py::class_<TwoQubitState>(m, "State")
        .def_property_readonly("matrix", [](const TwoQubitState& s) { return to_numpy(s.matrix()); })
        .def_property_readonly("diagonal", &TwoQubitState::diagonal)
        .def_property_readonly("p", &TwoQubitState::p)
        .def_property_readonly("q", &TwoQubitState::q)
        .def_property_readonly("r", &TwoQubitState::r)
        .def_property_readonly("s", &TwoQubitState::s)
        .def_property_readonly("u", &TwoQubitState::u)
        .def_property_readonly("v", &TwoQubitState::v)
        .def_property_readonly("w", &TwoQubitState::w)
        .def_property_readonly("x", &TwoQubitState::x)
        .def_property_readonly("y", &TwoQubitState::y)
        .def_property_readonly("z", &TwoQubitState::z);

    m.def("validate", [](const ComplexArray& a) { return TwoQubitState::validate(to_cmatrix(a)); },
          py::arg("matrix"), "Check a 4x4 density matrix and wrap it as a State.");
    m.def("bell_state", &named_states::bell_phi_plus);
    m.def("werner", &named_states::werner, py::arg("weight"));
    m.def("maximally_mixed", &named_states::maximally_mixed);
    m.def("random_mixed", &random_mixed, py::arg("seed"));
    m.def("random_pure", [](std::uint64_t seed) { return random_pure(seed).as_array(); }, py::arg("seed"));

    m.def("partial_transpose_b",
          [](const TwoQubitState& s) { return to_numpy(partial_transpose_B(s)); }, py::arg("state"));
    m.def("det_ptb", &det_ptb, py::arg("state"));
    m.def("det_ptb_expansion", &det_ptb_expansion, py::arg("state"));
    m.def("ppt_oracle",
          [](const TwoQubitState& s, double tol) { return std::string(to_string(ppt_oracle(s, tol))); },
          py::arg("state"), py::arg("tol") = kDetTol);
    m.def("negativity", &negativity, py::arg("state"));
    m.def("entanglement_estimate", &entanglement_estimate, py::arg("state"));
    m.def("trace_distance", &trace_distance, py::arg("a"), py::arg("b"));

    m.def("hamiltonian", [] { return to_numpy(build_hamiltonian().matrix); });
    m.def("local_hamiltonian", [] { return to_numpy(build_local_hamiltonian().matrix); });
    m.def("exact_weak_value",
          [](const TwoQubitState& s, int k) { return exact_weak_value(s, build_hamiltonian(), OutcomeIndex(k)); },
          py::arg("state"), py::arg("k"));
    m.def("weak_values", [](const TwoQubitState& s) { return weak_value_dict(weak_values_all(s)); },
          py::arg("state"), "Exact weak values keyed by outcome 1..16; undefined outcomes are omitted.");
    m.def("postselection_probability",
          [](const TwoQubitState& s, int k) { return postselection_probability(s, OutcomeIndex(k)); },
          py::arg("state"), py::arg("k"));
    m.def("detect",
          [](const TwoQubitState& s, std::optional<double> tol_det) { return report_dict(detect(s, tolerances(tol_det))); },
          py::arg("state"), py::arg("tol_det") = py::none());
    m.def("detect_pure",
          [](Complex a, Complex b, Complex c, Complex d) {
              return report_dict(detect_pure_local(PureAmplitudes::make(a, b, c, d)));
          },
          py::arg("a"), py::arg("b"), py::arg("c"), py::arg("d"));
    m.def("tomography",
          [](const TwoQubitState& s) { return reconstruct(weak_values_all(s), diagonals_from_postselection(s)); },
          py::arg("state"), "Rebuild the state from its exact weak values and post-selection probabilities.");

    m.def("estimate_weak_values",
          [](const TwoQubitState& s, double epsilon, double sigma, std::size_t grid_n, double grid_l) {
              const SimConfig cfg{epsilon, sigma, grid_n, grid_l};
              py::dict out;
              for (const WeakReadout& r : estimate_weak_values(s, cfg)) out[py::int_(r.k.k())] = r.estimate;
              return out;
          },
          py::arg("state"), py::arg("epsilon") = 1e-3, py::arg("sigma") = 1.0, py::arg("grid_n") = 4096,
          py::arg("grid_l") = 40.0);

    m.def("coupling_unitary", [](double eps) { return to_numpy(coupling_unitary(eps)); }, py::arg("epsilon"));
    m.def("circuit_unitary", [](double eps) { return to_numpy(assemble_unitary(build_coupling_circuit(eps))); },
          py::arg("epsilon"));
    m.def("verify_circuit", &verify_equivalence, py::arg("epsilon"));

    m.def("bound_check",
          [](const TwoQubitState& s, double delta, int trials, std::uint64_t seed) {
              const RobustnessReport report = bound_check(s, delta, trials, seed);
              py::dict out;
              out["delta"] = report.delta;
              out["m"] = report.m;
              out["bound"] = report.bound;
              out["checks"] = report.checks;
              out["violations"] = report.violations;
              out["margin"] = report.margin;
              return out;
          },
          py::arg("state"), py::arg("delta") = 1e-2, py::arg("trials") = 100, py::arg("seed") = 0);
}
