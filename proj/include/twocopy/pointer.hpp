// One-dimensional Gaussian pointer coupled through exp(-i eps H (x) P_x),
// post-selected in the computational basis of the two copies.

#pragma once

#include <cstddef>
#include <ostream>
#include <vector>

#include "twocopy/protocol.hpp"
#include "twocopy/qmat.hpp"
#include "twocopy/states.hpp"

namespace twocopy {

/// Uniform periodic grid x_j = -L + j dx, dx = 2L/n, n a power of two >= 256.
class PointerGrid {
public:
    PointerGrid(std::size_t n, double half_extent);

    std::size_t size() const { return n_; }
    double half_extent() const { return half_extent_; }
    double spacing() const { return 2.0 * half_extent_ / static_cast<double>(n_); }
    double position(std::size_t j) const { return -half_extent_ + static_cast<double>(j) * spacing(); }
    /// Angular wave number of DFT bin j in the standard layout
    /// (0, 1, ..., n/2 - 1, -n/2, ..., -1) * 2 pi / (n dx).
    double wave_number(std::size_t j) const;

private:
    std::size_t n_;
    double half_extent_;
};

struct PointerMoments {
    double norm = 0.0;
    double mean_x = 0.0;
    double var_x = 0.0;
    double mean_p = 0.0;
    double var_p = 0.0;
};

class PointerWave {
public:
    PointerWave(PointerGrid grid, std::vector<Complex> amplitudes);

    const PointerGrid& grid() const { return grid_; }
    const std::vector<Complex>& amplitudes() const { return amplitudes_; }

    /// sum |psi_j|^2 dx
    double norm() const;
    /// Position and momentum moments of the normalised wave.
    PointerMoments moments() const;
    /// psi(x) -> psi(x - shift), applied as exp(-i shift k) in the DFT domain.
    PointerWave translated(double shift) const;

    /// Rows "x,re,im".
    void write_csv(std::ostream& out) const;

private:
    PointerGrid grid_;
    std::vector<Complex> amplitudes_;
};

/// psi(x) proportional to exp(-x^2 / (4 sigma^2)); requires L >= 10 sigma.
PointerWave gaussian_pointer(double sigma, const PointerGrid& grid);

struct SimConfig {
    double epsilon = 1e-3;
    double sigma = 1.0;
    std::size_t grid_n = 4096;
    double grid_l = 40.0;

    /// Throws ConfigError unless 0 <= epsilon <= 0.1, sigma > 0 and the grid
    /// fits the pointer.
    void validate() const;
    PointerGrid grid() const { return PointerGrid(grid_n, grid_l); }
};

/// Post-selected pointer ensemble for one outcome.
struct PostSelectedPointer {
    double probability = 0.0;  // total post-selection probability
    PointerMoments moments;    // moments of the normalised mixed pointer
    /// Pure branches of the mixture with their normalised weights.
    std::vector<std::pair<double, PointerWave>> branches;
};

/// Exact joint evolution of rho (x) rho with the pointer followed by
/// projection on |u_k>. The pointer is translated by eps * lambda in each
/// eigenspace of H. Throws NoSignalError when the probability is below
/// den_tol.
PostSelectedPointer evolve_and_postselect(const TwoQubitState& rho, const WeakHamiltonian& h,
                                          const SimConfig& cfg, OutcomeIndex k,
                                          double den_tol = kDenominatorTol);

/// Re A = (<x>_post - <x>_in) / eps, Im A = (<p>_post - <p>_in) / (2 eps Var_in(p))
/// with Var_in(p) = 1 / (4 sigma^2).
Complex readout_weak_value(const PointerMoments& initial, const PointerMoments& post,
                           double epsilon, double sigma);

struct WeakReadout {
    OutcomeIndex k;
    Complex estimate;
    double postselect_prob;
};

/// Readouts for every outcome whose post-selection probability exceeds den_tol.
std::vector<WeakReadout> estimate_weak_values(const TwoQubitState& rho, const SimConfig& cfg,
                                              const WeakHamiltonian& h,
                                              double den_tol = kDenominatorTol);
std::vector<WeakReadout> estimate_weak_values(const TwoQubitState& rho, const SimConfig& cfg);

/// Readouts packed into a WeakValueSet (for feeding decide / reconstruct).
WeakValueSet to_weak_value_set(const std::vector<WeakReadout>& readouts);

}  // namespace twocopy
