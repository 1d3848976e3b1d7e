// Gate-level realisation of the two-copy weak interaction on four qubits.
//
// Qubits 0 and 1 hold copy 1 (Alice, Bob), qubits 2 and 3 hold copy 2.
// Qubit 0 is the most significant bit of the 16-dimensional basis index.

#pragma once

#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "twocopy/qmat.hpp"

namespace twocopy {

inline constexpr int kCircuitQubits = 4;

struct Control {
    int qubit;
    int value;  // 0 = anti-control, 1 = control
};

struct Gate {
    std::string label;
    std::vector<int> targets;   // most significant first
    CMatrix matrix;             // 2^|targets| square, unitary
    std::vector<Control> controls;
};

struct CircuitSpec {
    std::vector<Gate> gates;  // application order
    double epsilon = 0.0;
};

/// e^{-i eps sx}
CMatrix x_rotation(double epsilon);
/// |0><+| + |1><-|
CMatrix hadamard();

/// |0><0| (x) 1 (x) 1 (x) e^{-i eps sx} + |10><10| (x) e^{-i eps sx} (x) 1
///   + |11><11| (x) e^{-i eps sx (x) sx}, assembled directly as a 16x16 matrix.
CMatrix coupling_unitary(double epsilon);

/// Six-gate decomposition; the |11> branch uses
/// e^{-i eps sx (x) sx} = |+><+| (x) e^{-i eps sx} + |-><-| (x) e^{+i eps sx}
/// sandwiched between Hadamards on qubit 2.
CircuitSpec build_coupling_circuit(double epsilon);

/// 16x16 action of one gate. Throws Error for malformed or non-unitary gates.
CMatrix embed_gate(const Gate& gate);

/// Product of gate embeddings in application order.
CMatrix assemble_unitary(const CircuitSpec& circuit);

/// max-norm distance between the assembled circuit and coupling_unitary.
double verify_equivalence(double epsilon);

/// One line per gate: label, controls, targets.
void print_circuit(std::ostream& out, const CircuitSpec& circuit);

}  // namespace twocopy
