// Two-copy weak-value protocol: Hamiltonian, exact weak values, the
// entanglement decision tree and state reconstruction.

#pragma once

#include <array>
#include <optional>
#include <string_view>

#include "twocopy/qmat.hpp"
#include "twocopy/states.hpp"

namespace twocopy {

/// Zero-diagonal ("no signal") threshold on p, q, r, s.
inline constexpr double kDiagTol = 1e-10;
/// Nullity threshold for weak values in the vanishing-diagonal branches.
inline constexpr double kWeakValueTol = 1e-9;
/// Minimum post-selection probability for a weak value to be defined.
inline constexpr double kDenominatorTol = 1e-12;

struct Tolerances {
    double det = kDetTol;
    double diag = kDiagTol;
    double weak_value = kWeakValueTol;
    double denominator = kDenominatorTol;
};

/// Post-selection outcome k = 1..16 labelling |0000>, |0001>, ..., |1111>.
class OutcomeIndex {
public:
    constexpr explicit OutcomeIndex(int k) : k_(k) {
        if (k < 1 || k > 16) throw DimensionError("outcome index must be in 1..16");
    }
    constexpr int k() const { return k_; }
    constexpr std::size_t basis_index() const { return static_cast<std::size_t>(k_ - 1); }
    /// Copy-1 and copy-2 two-qubit basis labels (0..3) of |u_k>.
    constexpr int first_copy() const { return (k_ - 1) >> 2; }
    constexpr int second_copy() const { return (k_ - 1) & 3; }
    friend constexpr bool operator==(OutcomeIndex, OutcomeIndex) = default;

private:
    int k_;
};

/// Outcomes carrying the twelve ratios; 5..8 repeat 1..4.
inline constexpr std::array<int, 12> kInformativeOutcomes{1, 2, 3, 4, 9, 10, 11, 12, 13, 14, 15, 16};

/// Which operator acts on copy 2 inside each copy-1 block of the interaction.
enum class BlockOperator { FlipSecondQubit, FlipFirstQubit, FlipBoth };

enum class HamiltonianKind { General, PureLocal, Relocated };
std::string_view to_string(HamiltonianKind kind);

struct WeakHamiltonian {
    CMatrix matrix;  // 16x16, Hermitian, squares to identity
    HamiltonianKind kind;
};

/// |00><00| (x) H1 + |01><01| (x) H1 + |10><10| (x) H2 + |11><11| (x) H3 with
/// H1 = 1 (x) sx, H2 = sx (x) 1, H3 = sx (x) sx.
WeakHamiltonian build_hamiltonian();

/// Same construction with an arbitrary assignment of block operators to the
/// copy-1 basis states |00>, |01>, |10>, |11>.
WeakHamiltonian build_block_hamiltonian(const std::array<BlockOperator, 4>& layout);

/// 1 (x) 1 (x) 1 (x) sx, local on all four qubits.
WeakHamiltonian build_local_hamiltonian();

/// <u_k| rho (x) rho |u_k>
double postselection_probability(const TwoQubitState& rho, OutcomeIndex k);

/// <u_k| H (rho (x) rho) |u_k> / <u_k| rho (x) rho |u_k>. Throws NoSignalError
/// when the denominator does not exceed den_tol.
Complex exact_weak_value(const TwoQubitState& rho, const CMatrix& hamiltonian, OutcomeIndex k,
                         double den_tol = kDenominatorTol);
Complex exact_weak_value(const TwoQubitState& rho, const WeakHamiltonian& h, OutcomeIndex k,
                         double den_tol = kDenominatorTol);

/// Weak values over all sixteen outcomes; undefined where no signal.
class WeakValueSet {
public:
    void set(OutcomeIndex k, Complex value) { values_[k.basis_index()] = value; }
    std::optional<Complex> get(OutcomeIndex k) const { return values_[k.basis_index()]; }
    std::optional<Complex> get(int k) const { return get(OutcomeIndex(k)); }
    bool defined(int k) const { return get(k).has_value(); }
    int defined_count() const;

private:
    std::array<std::optional<Complex>, 16> values_{};
};

WeakValueSet weak_values_all(const TwoQubitState& rho, double den_tol = kDenominatorTol);
WeakValueSet weak_values_all(const TwoQubitState& rho, const WeakHamiltonian& h,
                             double den_tol = kDenominatorTol);

/// Matrix-element ratio that outcome k is expected to report under the
/// standard Hamiltonian, computed directly from rho (nullopt when the
/// ratio's diagonal is zero). Outcomes 5..8 map to 1..4.
std::optional<Complex> expected_ratio(const TwoQubitState& rho, OutcomeIndex k);

/// Largest |weak value - matrix-element ratio| over outcomes defined in both.
double max_identity_residual(const TwoQubitState& rho, const WeakValueSet& wv);

struct Diagonals {
    double p = 0.0, q = 0.0, r = 0.0, s = 0.0;
    double product() const { return p * q * r * s; }
    double min() const;
};

/// Square roots of the post-selection probabilities of outcomes 1, 6, 11, 16.
Diagonals diagonals_from_postselection(const TwoQubitState& rho);
/// Same, from a table of sixteen outcome probabilities (index k-1).
Diagonals diagonals_from_probabilities(const std::array<double, 16>& probabilities);

/// Diagonals solved from ratio quotients (q/p from u, r/p from v, s/p from w)
/// and p + q + r + s = 1. Only well-posed when u, v, w are non-zero.
Diagonals diagonals_from_ratio_chain(const WeakValueSet& wv);

enum class Ratio {
    UConjOverP,  // k = 1
    UOverQ,      // k = 2
    ZConjOverR,  // k = 3
    ZOverS,      // k = 4
    VConjOverP,  // k = 9
    YConjOverQ,  // k = 10
    VOverR,      // k = 11
    YOverS,      // k = 12
    WConjOverP,  // k = 13
    XConjOverQ,  // k = 14
    XOverR,      // k = 15
    WOverS,      // k = 16
};
std::string_view to_string(Ratio ratio);
int outcome_of(Ratio ratio);

/// The twelve ratios; each is filled from its own outcome or, when that
/// outcome had no signal, from its conjugate partner rescaled by the
/// diagonal quotient.
struct RatioSet {
    std::array<Complex, 12> values{};
    Complex operator[](Ratio r) const { return values[static_cast<std::size_t>(r)]; }
};

RatioSet ratios_from_weak_values(const WeakValueSet& wv, const Diagonals& diag);

/// One term of det(rho^{T_B})/(pqrs) as a signed product of ratios.
struct RatioFactor {
    Ratio ratio;
    bool conjugate;
};
enum class DiagonalQuotient { None, QROverPS, PSOverQR };
struct BracketTerm {
    int sign;
    std::array<std::optional<RatioFactor>, 4> factors;
    DiagonalQuotient quotient;
};

/// The 24-term table; evaluated by bracket_from_ratios.
const std::array<BracketTerm, 24>& bracket_terms();

/// det(rho^{T_B}) / (pqrs) assembled from ratios and diagonals.
double bracket_from_ratios(const RatioSet& ratios, const Diagonals& diag);

enum class DecisionPath { General, CaseI, CaseII, PureLocal };
std::string_view to_string(DecisionPath path);

struct DetectionReport {
    Verdict verdict = Verdict::Separable;
    DecisionPath path = DecisionPath::General;
    std::optional<double> det_scaled;
    std::optional<double> det_value;
    double e_estimate = 0.0;
    WeakValueSet weak_values;
    /// Outcome inspected in the vanishing-diagonal branches, with the
    /// Hamiltonian it was measured under.
    std::optional<int> probe_outcome;
    std::optional<HamiltonianKind> probe_hamiltonian;
};

/// Full decision tree on exact weak values of rho (x) rho.
DetectionReport detect(const TwoQubitState& rho, const Tolerances& tol = {});

/// Copy-1 block layout used when s vanishes: H3 moves to the |01> block so
/// that x*/q is read at outcome 6 with post-selection probability q^2.
inline constexpr std::array<BlockOperator, 4> kRelocatedLayout{
    BlockOperator::FlipSecondQubit, BlockOperator::FlipBoth, BlockOperator::FlipFirstQubit,
    BlockOperator::FlipSecondQubit};
inline constexpr int kRelocatedProbeOutcome = 6;

/// Decision from measured data only: weak values under the standard
/// Hamiltonian plus diagonals. `relocated_probe` is x*/q read under the
/// relocated layout; it is required only on the Case I path with s = 0,
/// where outcome 14 carries no signal.
DetectionReport decide(const WeakValueSet& wv, const Diagonals& diag, const Tolerances& tol = {},
                       std::optional<Complex> relocated_probe = std::nullopt);

/// Rebuilds rho from weak values and diagonals. Throws InvalidStateError when
/// the result has an eigenvalue below -1e-6.
TwoQubitState reconstruct(const WeakValueSet& wv, const Diagonals& diag);

/// Pure-state variant under the local Hamiltonian.
DetectionReport detect_pure_local(const PureAmplitudes& psi, const Tolerances& tol = {});

}  // namespace twocopy
