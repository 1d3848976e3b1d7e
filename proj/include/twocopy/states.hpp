// Two-qubit density matrices, partial transposition and the separability oracles.

#pragma once

#include <array>
#include <cstdint>
#include <string_view>

#include "twocopy/qmat.hpp"

namespace twocopy {

/// Absolute threshold on det(rho^{T_B}) separating Entangled from Separable.
inline constexpr double kDetTol = 1e-9;
/// Tolerance for unit trace and positivity of a density matrix.
inline constexpr double kStateTol = 1e-10;

enum class Verdict { Entangled, Separable };
std::string_view to_string(Verdict v);

/// Validated 4x4 density matrix in the basis |00>, |01>, |10>, |11>.
///
///     | p   u   v   w |
///     | u*  q   x   y |
///     | v*  x*  r   z |
///     | w*  y*  z*  s |
class TwoQubitState {
public:
    /// Checks shape, Hermiticity, unit trace and positivity (in that order) and
    /// returns the symmetrised matrix. Throws InvalidStateError.
    static TwoQubitState validate(const CMatrix& m);

    const CMatrix& matrix() const { return matrix_; }

    double p() const { return matrix_(0, 0).real(); }
    double q() const { return matrix_(1, 1).real(); }
    double r() const { return matrix_(2, 2).real(); }
    double s() const { return matrix_(3, 3).real(); }
    Complex u() const { return matrix_(0, 1); }
    Complex v() const { return matrix_(0, 2); }
    Complex w() const { return matrix_(0, 3); }
    Complex x() const { return matrix_(1, 2); }
    Complex y() const { return matrix_(1, 3); }
    Complex z() const { return matrix_(2, 3); }
    std::array<double, 4> diagonal() const { return {p(), q(), r(), s()}; }

private:
    explicit TwoQubitState(CMatrix m) : matrix_(std::move(m)) {}
    CMatrix matrix_;
};

/// a|00> + b|01> + c|10> + d|11>, normalised to 1 within kStateTol.
struct PureAmplitudes {
    Complex a, b, c, d;

    /// Throws InvalidStateError(NotNormalized) when |a|^2+|b|^2+|c|^2+|d|^2 != 1.
    static PureAmplitudes make(Complex a, Complex b, Complex c, Complex d);
    std::array<Complex, 4> as_array() const { return {a, b, c, d}; }
    TwoQubitState to_state() const;
    /// ad - bc; zero exactly for product states.
    Complex separability_minor() const { return a * d - b * c; }
};

namespace named_states {
/// |Phi+><Phi+| with |Phi+> = (|00> + |11>)/sqrt(2).
TwoQubitState bell_phi_plus();
/// weight |Phi+><Phi+| + (1 - weight) I/4; entangled iff weight > 1/3.
TwoQubitState werner(double weight);
TwoQubitState maximally_mixed();
/// Computational basis projector |i><i|, i in 0..3.
TwoQubitState basis(int index);
/// rho_A (x) rho_B for 2x2 density matrices.
TwoQubitState product(const CMatrix& rho_a, const CMatrix& rho_b);
}  // namespace named_states

/// Transposes the second subsystem: coefficient p^{ij}_{kl} moves to p^{ij}_{lk}.
CMatrix partial_transpose_B(const CMatrix& m);
CMatrix partial_transpose_B(const TwoQubitState& rho);

/// Re det(rho^{T_B}) via LU.
double det_ptb(const TwoQubitState& rho);

/// pqrs times the 24-term bracket in the matrix-element expansion of
/// det(rho^{T_B}). Throws Error when any diagonal is zero; those states take
/// the vanishing-diagonal branches of the detector instead.
double det_ptb_expansion(const TwoQubitState& rho);

/// Smallest eigenvalue of rho^{T_B}.
double min_pt_eigenvalue(const TwoQubitState& rho);

/// Eigenvalue-based PPT ground truth: Entangled iff min PT eigenvalue < -tol.
Verdict ppt_oracle(const TwoQubitState& rho, double tol = kDetTol);

/// (||rho^{T_B}||_1 - 1) / 2
double negativity(const TwoQubitState& rho);

/// max{0, -det(rho^{T_B})}
double entanglement_estimate(const TwoQubitState& rho);

/// Trace distance (1/2)||a - b||_1.
double trace_distance(const TwoQubitState& a, const TwoQubitState& b);

/// Splitmix64 step; used to derive per-trial seeds from a master seed.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

/// G G^dagger / tr(G G^dagger) for a 4x4 complex Ginibre matrix G.
TwoQubitState random_mixed(std::uint64_t seed);
/// Haar-random pure state (normalised complex Gaussian 4-vector).
PureAmplitudes random_pure(std::uint64_t seed);
/// Random product of two Haar-random single-qubit pure states.
PureAmplitudes random_product_pure(std::uint64_t seed);

}  // namespace twocopy
