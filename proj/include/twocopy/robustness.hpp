// Sensitivity of the weak values to a mis-specified interaction Hamiltonian.

#pragma once

#include <array>
#include <cstdint>
#include <optional>

#include "twocopy/protocol.hpp"
#include "twocopy/qmat.hpp"
#include "twocopy/states.hpp"

namespace twocopy {

/// H - H_e for an erroneous Hamiltonian H_e; delta is its trace norm.
struct Perturbation {
    CMatrix matrix;
    double delta = 0.0;
};

/// Dense random Hermitian 16x16 perturbation rescaled to trace norm delta.
Perturbation random_perturbation(double delta, std::uint64_t seed);

/// Miscalibrated coupling H_e = (1 + eta) H, so H - H_e = -eta H.
Perturbation miscalibration_perturbation(const WeakHamiltonian& h, double eta);

/// |<H>^(k) - <H_e>^(k)| with H_e = H - perturbation.
double weak_value_deviation(const TwoQubitState& rho, const WeakHamiltonian& h,
                            const Perturbation& perturbation, OutcomeIndex k,
                            double den_tol = kDenominatorTol);

/// min over the products {p,q,r,s} x {p,q,r,s}.
double min_cross_product(const Diagonals& diag);

struct RobustnessReport {
    double delta = 0.0;
    double m = 0.0;
    double bound = 0.0;  // delta / m
    int trials = 0;
    long checks = 0;
    long violations = 0;
    /// Worst deviation seen per outcome (index k-1); empty for undefined outcomes.
    std::array<std::optional<double>, 16> worst_deviation{};
    /// min over checks of bound - deviation.
    double margin = 0.0;
};

/// Runs `trials` random perturbations of trace norm delta against the
/// standard Hamiltonian and checks every defined outcome against delta/m.
/// Throws Error when a diagonal of rho falls below kDiagTol.
RobustnessReport bound_check(const TwoQubitState& rho, double delta, int trials,
                             std::uint64_t seed);

}  // namespace twocopy
