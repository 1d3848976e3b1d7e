#include "twocopy/states.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace twocopy {

std::string_view to_string(Verdict v) {
    return v == Verdict::Entangled ? "Entangled" : "Separable";
}

TwoQubitState TwoQubitState::validate(const CMatrix& m) {
    if (m.rows() != 4 || m.cols() != 4) {
        throw InvalidStateError(StateErrorKind::WrongShape,
                                "two-qubit state must be 4x4, got " + std::to_string(m.rows()) +
                                    "x" + std::to_string(m.cols()));
    }
    const double defect = hermiticity_defect(m);
    if (defect > kHermitianTol) {
        throw InvalidStateError(StateErrorKind::NotHermitian,
                                "state is not Hermitian (defect " + std::to_string(defect) + ")");
    }
    CMatrix sym = 0.5 * (m + adjoint(m));
    const double trace = sym.trace().real();
    if (std::abs(trace - 1.0) > kStateTol) {
        throw InvalidStateError(StateErrorKind::TraceNotOne,
                                "state trace is " + std::to_string(trace) + ", expected 1");
    }
    const double lowest = hermitian_eigen(sym).values.front();
    if (lowest < -kStateTol) {
        throw InvalidStateError(StateErrorKind::NotPositive,
                                "state has negative eigenvalue " + std::to_string(lowest));
    }
    return TwoQubitState(std::move(sym));
}

PureAmplitudes PureAmplitudes::make(Complex a, Complex b, Complex c, Complex d) {
    for (const Complex& amp : {a, b, c, d}) {
        if (!std::isfinite(amp.real()) || !std::isfinite(amp.imag())) {
            throw NonFiniteError("amplitude is not finite");
        }
    }
    const double norm = std::norm(a) + std::norm(b) + std::norm(c) + std::norm(d);
    if (std::abs(norm - 1.0) > kStateTol) {
        throw InvalidStateError(StateErrorKind::NotNormalized,
                                "amplitudes have squared norm " + std::to_string(norm));
    }
    return PureAmplitudes{a, b, c, d};
}

TwoQubitState PureAmplitudes::to_state() const {
    const auto amps = as_array();
    return TwoQubitState::validate(CMatrix::outer(amps));
}

namespace named_states {

TwoQubitState bell_phi_plus() {
    const double h = 1.0 / std::sqrt(2.0);
    const std::array<Complex, 4> ket{h, 0.0, 0.0, h};
    return TwoQubitState::validate(CMatrix::outer(ket));
}

TwoQubitState werner(double weight) {
    const double diag_outer = (1.0 + weight) / 4.0;
    const double diag_inner = (1.0 - weight) / 4.0;
    CMatrix m = CMatrix::diagonal({diag_outer, diag_inner, diag_inner, diag_outer});
    m(0, 3) = weight / 2.0;
    m(3, 0) = weight / 2.0;
    return TwoQubitState::validate(m);
}

TwoQubitState maximally_mixed() { return TwoQubitState::validate(0.25 * CMatrix::identity(4)); }

TwoQubitState basis(int index) {
    if (index < 0 || index > 3) throw DimensionError("basis index must be in 0..3");
    CMatrix m(4, 4);
    m(index, index) = 1.0;
    return TwoQubitState::validate(m);
}

TwoQubitState product(const CMatrix& rho_a, const CMatrix& rho_b) {
    if (rho_a.rows() != 2 || rho_a.cols() != 2 || rho_b.rows() != 2 || rho_b.cols() != 2) {
        throw DimensionError("product state factors must be 2x2");
    }
    return TwoQubitState::validate(kron(rho_a, rho_b));
}

}  // namespace named_states

CMatrix partial_transpose_B(const CMatrix& m) {
    if (m.rows() != 4 || m.cols() != 4) throw DimensionError("partial transpose needs a 4x4 matrix");
    CMatrix out(4, 4);
    // Row index 2i + k, column index 2j + l.
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            for (int k = 0; k < 2; ++k) {
                for (int l = 0; l < 2; ++l) out(2 * i + k, 2 * j + l) = m(2 * i + l, 2 * j + k);
            }
        }
    }
    return out;
}

CMatrix partial_transpose_B(const TwoQubitState& rho) { return partial_transpose_B(rho.matrix()); }

double det_ptb(const TwoQubitState& rho) {
    return determinant(partial_transpose_B(rho)).real();
}

double det_ptb_expansion(const TwoQubitState& rho) {
    const double p = rho.p(), q = rho.q(), r = rho.r(), s = rho.s();
    if (p <= 0.0 || q <= 0.0 || r <= 0.0 || s <= 0.0) {
        throw Error("det_ptb_expansion requires all diagonal elements to be positive");
    }
    const Complex u = rho.u(), v = rho.v(), w = rho.w();
    const Complex x = rho.x(), y = rho.y(), z = rho.z();
    const Complex uc = std::conj(u), vc = std::conj(v), wc = std::conj(w);
    const Complex xc = std::conj(x), yc = std::conj(y), zc = std::conj(z);
    const double pqrs = p * q * r * s;

    Complex bracket = u * uc * z * zc / pqrs;
    bracket -= u * v * yc * zc / pqrs;
    bracket -= u * wc * x * z / pqrs;
    bracket -= uc * vc * y * z / pqrs;
    bracket -= uc * w * xc * zc / pqrs;
    bracket += v * vc * y * yc / pqrs;
    bracket -= v * wc * xc * y / pqrs;
    bracket -= vc * w * x * yc / pqrs;
    bracket += w * wc * x * xc / pqrs;
    bracket += u * v * wc / (p * q * r);
    bracket += uc * vc * w / (p * q * r);
    bracket += u * x * yc / (p * q * s);
    bracket += uc * xc * y / (p * q * s);
    bracket -= u * uc / (p * q);
    bracket += v * xc * zc / (p * r * s);
    bracket += vc * x * z / (p * r * s);
    bracket -= v * vc / (p * r);
    bracket -= x * xc / (p * s);
    bracket += w * yc * zc / (q * r * s);
    bracket += wc * y * z / (q * r * s);
    bracket -= w * wc / (q * r);
    bracket -= y * yc / (q * s);
    bracket -= z * zc / (r * s);
    bracket += 1.0;
    return pqrs * bracket.real();
}

double min_pt_eigenvalue(const TwoQubitState& rho) {
    return hermitian_eigen(partial_transpose_B(rho)).values.front();
}

Verdict ppt_oracle(const TwoQubitState& rho, double tol) {
    return min_pt_eigenvalue(rho) < -tol ? Verdict::Entangled : Verdict::Separable;
}

double negativity(const TwoQubitState& rho) {
    double sum = 0.0;
    for (double lambda : hermitian_eigen(partial_transpose_B(rho)).values) {
        if (lambda < 0.0) sum -= lambda;
    }
    return sum;
}

double entanglement_estimate(const TwoQubitState& rho) { return std::max(0.0, -det_ptb(rho)); }

double trace_distance(const TwoQubitState& a, const TwoQubitState& b) {
    return 0.5 * trace_norm(a.matrix() - b.matrix());
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

namespace {

Complex complex_gaussian(std::mt19937_64& rng, std::normal_distribution<double>& normal) {
    const double re = normal(rng);
    const double im = normal(rng);
    return {re, im};
}

std::array<Complex, 2> random_qubit(std::mt19937_64& rng, std::normal_distribution<double>& normal) {
    std::array<Complex, 2> ket{complex_gaussian(rng, normal), complex_gaussian(rng, normal)};
    const double n = std::sqrt(std::norm(ket[0]) + std::norm(ket[1]));
    return {ket[0] / n, ket[1] / n};
}

}  // namespace

TwoQubitState random_mixed(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    CMatrix g(4, 4);
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < 4; ++j) g(i, j) = complex_gaussian(rng, normal);
    }
    CMatrix rho = g * adjoint(g);
    rho *= 1.0 / rho.trace().real();
    return TwoQubitState::validate(rho);
}

PureAmplitudes random_pure(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::array<Complex, 4> amps;
    double norm = 0.0;
    for (Complex& amp : amps) {
        amp = complex_gaussian(rng, normal);
        norm += std::norm(amp);
    }
    norm = std::sqrt(norm);
    return PureAmplitudes::make(amps[0] / norm, amps[1] / norm, amps[2] / norm, amps[3] / norm);
}

PureAmplitudes random_product_pure(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    const auto alice = random_qubit(rng, normal);
    const auto bob = random_qubit(rng, normal);
    return PureAmplitudes::make(alice[0] * bob[0], alice[0] * bob[1], alice[1] * bob[0],
                                alice[1] * bob[1]);
}

}  // namespace twocopy
