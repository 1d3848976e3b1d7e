#include "twocopy/robustness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "parallel.hpp"

namespace twocopy {

Perturbation random_perturbation(double delta, std::uint64_t seed) {
    if (!(delta >= 0.0) || !std::isfinite(delta)) throw ConfigError("delta must be non-negative");
    if (delta == 0.0) return {CMatrix(16, 16), 0.0};
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    CMatrix g(16, 16);
    for (std::size_t i = 0; i < 16; ++i) {
        for (std::size_t j = 0; j < 16; ++j) {
            const double re = normal(rng);
            const double im = normal(rng);
            g(i, j) = Complex{re, im};
        }
    }
    CMatrix hermitian = 0.5 * (g + adjoint(g));
    hermitian *= delta / trace_norm(hermitian);
    return {std::move(hermitian), delta};
}

Perturbation miscalibration_perturbation(const WeakHamiltonian& h, double eta) {
    CMatrix diff = Complex{-eta, 0.0} * h.matrix;
    const double delta = trace_norm(diff);
    return {std::move(diff), delta};
}

double weak_value_deviation(const TwoQubitState& rho, const WeakHamiltonian& h,
                            const Perturbation& perturbation, OutcomeIndex k, double den_tol) {
    const Complex ideal = exact_weak_value(rho, h.matrix, k, den_tol);
    const Complex erroneous = exact_weak_value(rho, h.matrix - perturbation.matrix, k, den_tol);
    return std::abs(ideal - erroneous);
}

double min_cross_product(const Diagonals& diag) {
    const std::array<double, 4> d{diag.p, diag.q, diag.r, diag.s};
    double best = std::numeric_limits<double>::infinity();
    for (double a : d) {
        for (double b : d) best = std::min(best, a * b);
    }
    return best;
}

RobustnessReport bound_check(const TwoQubitState& rho, double delta, int trials,
                             std::uint64_t seed) {
    if (trials < 1) throw ConfigError("robustness sweep needs at least one trial");
    const Diagonals diag = diagonals_from_postselection(rho);
    if (diag.min() < kDiagTol) {
        throw Error("robustness bound needs all diagonals positive (min " +
                    std::to_string(diag.min()) + ")");
    }
    RobustnessReport report;
    report.delta = delta;
    report.trials = trials;
    const double min_diag = std::min({rho.p(), rho.q(), rho.r(), rho.s()});
    report.m = min_diag * min_diag;
    const double cross = min_cross_product(Diagonals{rho.p(), rho.q(), rho.r(), rho.s()});
    if (std::abs(cross - report.m) > 1e-15 * std::max(1.0, report.m)) {
        throw Error("m mismatch between squared minimum and cross-product minimum");
    }
    report.bound = delta / report.m;

    static const WeakHamiltonian h = build_hamiltonian();
    const WeakValueSet ideal = weak_values_all(rho, h);

    std::vector<std::array<std::optional<double>, 16>> per_trial(static_cast<std::size_t>(trials));
    parallel_for(per_trial.size(), [&](std::size_t t) {
        const Perturbation pert = random_perturbation(delta, derive_seed(seed, t));
        const WeakHamiltonian erroneous{h.matrix - pert.matrix, HamiltonianKind::General};
        const WeakValueSet perturbed = weak_values_all(rho, erroneous);
        for (int k = 1; k <= 16; ++k) {
            const auto a = ideal.get(k);
            const auto b = perturbed.get(k);
            if (a && b) per_trial[t][static_cast<std::size_t>(k - 1)] = std::abs(*a - *b);
        }
    });

    report.margin = std::numeric_limits<double>::infinity();
    for (const auto& deviations : per_trial) {
        for (std::size_t i = 0; i < 16; ++i) {
            if (!deviations[i]) continue;
            const double d = *deviations[i];
            ++report.checks;
            if (d > report.bound) ++report.violations;
            report.margin = std::min(report.margin, report.bound - d);
            report.worst_deviation[i] = std::max(report.worst_deviation[i].value_or(0.0), d);
        }
    }
    return report;
}

}  // namespace twocopy
