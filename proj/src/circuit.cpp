#include "twocopy/circuit.hpp"

#include <algorithm>
#include <cmath>

namespace twocopy {

namespace {

int bit_of(std::size_t index, int qubit) {
    return static_cast<int>((index >> (kCircuitQubits - 1 - qubit)) & 1U);
}

std::size_t with_bit(std::size_t index, int qubit, int value) {
    const std::size_t mask = std::size_t{1} << (kCircuitQubits - 1 - qubit);
    return value ? (index | mask) : (index & ~mask);
}

void check_gate(const Gate& gate) {
    if (gate.targets.empty()) throw Error("gate '" + gate.label + "' has no targets");
    const std::size_t dim = std::size_t{1} << gate.targets.size();
    if (gate.matrix.rows() != dim || gate.matrix.cols() != dim) {
        throw DimensionError("gate '" + gate.label + "' matrix does not match its target count");
    }
    std::vector<int> used = gate.targets;
    for (const Control& c : gate.controls) {
        if (c.value != 0 && c.value != 1) throw Error("control value must be 0 or 1");
        used.push_back(c.qubit);
    }
    for (int q : used) {
        if (q < 0 || q >= kCircuitQubits) throw Error("gate '" + gate.label + "' qubit out of range");
    }
    std::sort(used.begin(), used.end());
    if (std::adjacent_find(used.begin(), used.end()) != used.end()) {
        throw Error("gate '" + gate.label + "' reuses a qubit among controls and targets");
    }
    const double defect =
        max_abs_diff(adjoint(gate.matrix) * gate.matrix, CMatrix::identity(dim));
    if (defect > 1e-12) {
        throw Error("gate '" + gate.label + "' is not unitary (defect " + std::to_string(defect) + ")");
    }
}

CMatrix block_projector(int first_copy_state) {
    CMatrix p(4, 4);
    p(first_copy_state, first_copy_state) = 1.0;
    return p;
}

}  // namespace

CMatrix x_rotation(double epsilon) {
    return CMatrix{{std::cos(epsilon), Complex{0.0, -std::sin(epsilon)}},
                   {Complex{0.0, -std::sin(epsilon)}, std::cos(epsilon)}};
}

CMatrix hadamard() {
    const double h = 1.0 / std::sqrt(2.0);
    return CMatrix{{h, h}, {h, -h}};
}

CMatrix coupling_unitary(double epsilon) {
    const CMatrix i2 = pauli::identity2();
    const CMatrix rx = x_rotation(epsilon);
    // e^{-i eps sx (x) sx} = cos(eps) 1 - i sin(eps) sx (x) sx since (sx (x) sx)^2 = 1.
    const CMatrix xx = kron(pauli::x(), pauli::x());
    const CMatrix rxx = Complex{std::cos(epsilon), 0.0} * CMatrix::identity(4) +
                        Complex{0.0, -std::sin(epsilon)} * xx;

    CMatrix zero_projector(2, 2);
    zero_projector(0, 0) = 1.0;
    CMatrix u = kron(kron(zero_projector, i2), kron(i2, rx));
    u += kron(block_projector(2), kron(rx, i2));
    u += kron(block_projector(3), rxx);
    return u;
}

CircuitSpec build_coupling_circuit(double epsilon) {
    CircuitSpec c;
    c.epsilon = epsilon;
    const CMatrix forward = x_rotation(epsilon);
    const CMatrix reverse = x_rotation(-epsilon);  // R_X = e^{+i eps sx}
    c.gates.push_back({"Rx(-eps)", {3}, forward, {{0, 0}}});
    c.gates.push_back({"Rx(-eps)", {2}, forward, {{0, 1}, {1, 0}}});
    c.gates.push_back({"H_D", {2}, hadamard(), {}});
    c.gates.push_back({"Rx(-eps)", {3}, forward, {{0, 1}, {1, 1}, {2, 0}}});
    c.gates.push_back({"R_X", {3}, reverse, {{0, 1}, {1, 1}, {2, 1}}});
    c.gates.push_back({"H_D", {2}, hadamard(), {}});
    return c;
}

CMatrix embed_gate(const Gate& gate) {
    check_gate(gate);
    constexpr std::size_t dim = std::size_t{1} << kCircuitQubits;
    const std::size_t local_dim = std::size_t{1} << gate.targets.size();
    CMatrix out(dim, dim);
    for (std::size_t col = 0; col < dim; ++col) {
        const bool active = std::all_of(gate.controls.begin(), gate.controls.end(),
                                        [&](const Control& c) { return bit_of(col, c.qubit) == c.value; });
        if (!active) {
            out(col, col) = 1.0;
            continue;
        }
        std::size_t local_col = 0;
        for (int t : gate.targets) local_col = (local_col << 1) | static_cast<std::size_t>(bit_of(col, t));
        for (std::size_t local_row = 0; local_row < local_dim; ++local_row) {
            std::size_t row = col;
            for (std::size_t i = 0; i < gate.targets.size(); ++i) {
                const int bit = static_cast<int>((local_row >> (gate.targets.size() - 1 - i)) & 1U);
                row = with_bit(row, gate.targets[i], bit);
            }
            out(row, col) = gate.matrix(local_row, local_col);
        }
    }
    return out;
}

CMatrix assemble_unitary(const CircuitSpec& circuit) {
    CMatrix u = CMatrix::identity(std::size_t{1} << kCircuitQubits);
    for (const Gate& gate : circuit.gates) u = embed_gate(gate) * u;
    return u;
}

double verify_equivalence(double epsilon) {
    return max_abs_diff(assemble_unitary(build_coupling_circuit(epsilon)), coupling_unitary(epsilon));
}

void print_circuit(std::ostream& out, const CircuitSpec& circuit) {
    for (const Gate& gate : circuit.gates) {
        out << gate.label << " controls=[";
        for (std::size_t i = 0; i < gate.controls.size(); ++i) {
            if (i) out << ',';
            out << 'q' << gate.controls[i].qubit << '=' << gate.controls[i].value;
        }
        out << "] targets=[";
        for (std::size_t i = 0; i < gate.targets.size(); ++i) {
            if (i) out << ',';
            out << 'q' << gate.targets[i];
        }
        out << "]\n";
    }
}

}  // namespace twocopy
