#include <gtest/gtest.h>

#include <sstream>

#include "oracles.hpp"
#include "twocopy/errors.hpp"
#include "twocopy/pointer.hpp"

using namespace twocopy;

namespace {

// Closed-form readout for one pure branch with weak value A. Because H^2 = I,
// the post-selected pointer is (cos(eps p) - i A sin(eps p)) phi(p). With a
// Gaussian of momentum variance V the moments integrate to
//   <x> = eps Re A / N,   <p> = 2 eps V Im A exp(-2 eps^2 V) / N,
//   N = (1 + e)/2 + |A|^2 (1 - e)/2,  e = exp(-2 eps^2 V).
struct BranchMoments {
    double weight;  // unnormalised probability times N
    double x;       // weight times <x>
    double p;
};

BranchMoments branch(double prob, Complex a, double eps, double var_p) {
    const double e = std::exp(-2.0 * eps * eps * var_p);
    const double n = (1.0 + e) / 2.0 + std::norm(a) * (1.0 - e) / 2.0;
    return {prob * n, prob * eps * a.real(), prob * 2.0 * eps * var_p * a.imag() * e};
}

// Mixture over the eigen-ensemble of rho x rho, branch weak values from
// explicit sums over the two-copy Hamiltonian.
Complex closed_form_estimate(const TwoQubitState& rho, int k, double eps, double sigma) {
    const auto eig = hermitian_eigen(rho.matrix());
    const double var_p = 1.0 / (4.0 * sigma * sigma);
    const int target = k - 1;
    double weight = 0.0, sx = 0.0, sp = 0.0;
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) {
            const double mu = eig.values[i] * eig.values[j];
            if (mu <= 0.0) continue;
            auto amp = [&](int b) { return eig.vectors(static_cast<std::size_t>(b >> 2), i) *
                                           eig.vectors(static_cast<std::size_t>(b & 3), j); };
            const Complex overlap = amp(target);
            if (std::norm(overlap) < 1e-300) continue;
            Complex num = 0.0;
            for (int b = 0; b < 16; ++b) num += oracle::hamiltonian_entry(target, b) * amp(b);
            const BranchMoments bm = branch(mu * std::norm(overlap), num / overlap, eps, var_p);
            weight += bm.weight;
            sx += bm.x;
            sp += bm.p;
        }
    return {sx / weight / eps, sp / weight / (2.0 * eps * var_p)};
}

}  // namespace

TEST(Pointer, GridLayout) {
    const PointerGrid grid(256, 10.0);
    EXPECT_DOUBLE_EQ(grid.spacing(), 20.0 / 256.0);
    EXPECT_DOUBLE_EQ(grid.position(0), -10.0);
    EXPECT_DOUBLE_EQ(grid.wave_number(0), 0.0);
    EXPECT_LT(grid.wave_number(200), 0.0);
    EXPECT_THROW(PointerGrid(100, 10.0), ConfigError);
    EXPECT_THROW(PointerGrid(128, 10.0), ConfigError);
}

TEST(Pointer, GaussianMoments) {
    const PointerGrid grid(4096, 40.0);
    const PointerMoments m = gaussian_pointer(1.0, grid).moments();
    EXPECT_NEAR(m.norm, 1.0, 1e-10);
    EXPECT_NEAR(m.mean_x, 0.0, 1e-12);
    EXPECT_NEAR(m.var_x, 1.0, 1e-8);
    EXPECT_NEAR(m.var_p, 0.25, 1e-6);
    EXPECT_NEAR(m.var_p * m.var_x, 0.25, 1e-6);

    const PointerMoments wide = gaussian_pointer(2.0, grid).moments();
    EXPECT_NEAR(wide.var_p, m.var_p / 4.0, 1e-6);
}

TEST(Pointer, GaussianNeedsRoom) {
    EXPECT_THROW(gaussian_pointer(5.0, PointerGrid(4096, 40.0)), ConfigError);
}

TEST(Pointer, TranslationShiftsMean) {
    const PointerWave wave = gaussian_pointer(1.0, PointerGrid(4096, 40.0));
    for (double shift : {1e-3, -0.5, 3.0}) {
        EXPECT_NEAR(wave.translated(shift).moments().mean_x, shift, 1e-10);
        EXPECT_NEAR(wave.translated(shift).norm(), 1.0, 1e-10);
    }
}

TEST(Pointer, SimConfigValidation) {
    SimConfig cfg;
    EXPECT_NO_THROW(cfg.validate());
    cfg.epsilon = 0.2;
    EXPECT_THROW(cfg.validate(), ConfigError);
    cfg.epsilon = 1e-3;
    cfg.sigma = -1.0;
    EXPECT_THROW(cfg.validate(), ConfigError);
}

TEST(Pointer, ZeroCouplingIsExact) {
    const TwoQubitState rho = random_mixed(2);
    const SimConfig cfg{0.0, 1.0, 4096, 40.0};
    const PointerMoments initial = gaussian_pointer(1.0, cfg.grid()).moments();
    for (int k = 1; k <= 16; ++k) {
        const PostSelectedPointer post = evolve_and_postselect(rho, build_hamiltonian(), cfg, OutcomeIndex(k));
        const double expected = (rho.matrix()((k - 1) >> 2, (k - 1) >> 2) * rho.matrix()((k - 1) & 3, (k - 1) & 3)).real();
        EXPECT_NEAR(post.probability, expected, 1e-12);
        EXPECT_NEAR(post.moments.mean_x, initial.mean_x, 1e-12);
        EXPECT_NEAR(post.moments.mean_p, initial.mean_p, 1e-12);
    }
}

TEST(Pointer, ProbabilitiesSumToOne) {
    const TwoQubitState rho = random_mixed(8);
    const SimConfig cfg{0.05, 1.0, 4096, 40.0};
    double total = 0.0;
    for (int k = 1; k <= 16; ++k) {
        total += evolve_and_postselect(rho, build_hamiltonian(), cfg, OutcomeIndex(k)).probability;
    }
    EXPECT_NEAR(total, 1.0, 1e-10);
}

TEST(Pointer, BellShiftAtOutcomeSixteen) {
    const SimConfig cfg;
    const PostSelectedPointer post =
        evolve_and_postselect(named_states::bell_phi_plus(), build_hamiltonian(), cfg, OutcomeIndex(16));
    EXPECT_NEAR(post.moments.mean_x, 1e-3, 1e-9);
    const PointerMoments initial = gaussian_pointer(1.0, cfg.grid()).moments();
    EXPECT_NEAR(std::abs(readout_weak_value(initial, post.moments, cfg.epsilon, cfg.sigma) - 1.0), 0.0, 1e-6);
}

TEST(Pointer, ImaginaryWeakValueMovesMomentum) {
    // (|00> + i|11>)/sqrt2 has w/s = -i at outcome 16.
    const TwoQubitState rho = PureAmplitudes::make(M_SQRT1_2, 0.0, 0.0, Complex{0.0, M_SQRT1_2}).to_state();
    const SimConfig cfg;
    const PostSelectedPointer post = evolve_and_postselect(rho, build_hamiltonian(), cfg, OutcomeIndex(16));
    EXPECT_NEAR(post.moments.mean_p, 2.0 * cfg.epsilon * 0.25 * -1.0, 1e-9);
    EXPECT_NEAR(post.moments.mean_x, 0.0, 1e-12);
}

TEST(Pointer, NoSignalBelowThreshold) {
    // Outcome 2 has p q = 0 for the Bell state. At zero coupling nothing leaks in.
    EXPECT_THROW(evolve_and_postselect(named_states::bell_phi_plus(), build_hamiltonian(),
                                       SimConfig{0.0, 1.0, 4096, 40.0}, OutcomeIndex(2)),
                 NoSignalError);
    // The sweep only reads outcomes with a non-vanishing exact probability.
    EXPECT_EQ(estimate_weak_values(named_states::bell_phi_plus(), SimConfig{}).size(), 4U);
}

TEST(Pointer, EstimatesMatchClosedFormDynamics) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const TwoQubitState rho = random_mixed(seed);
        for (double eps : {1e-3, 0.05}) {
            const SimConfig cfg{eps, 1.0, 4096, 40.0};
            for (const WeakReadout& r : estimate_weak_values(rho, cfg)) {
                const Complex expected = closed_form_estimate(rho, r.k.k(), eps, 1.0);
                EXPECT_LT(std::abs(r.estimate - expected), 1e-8 * std::max(1.0, std::abs(expected)))
                    << "seed " << seed << " k " << r.k.k() << " eps " << eps;
            }
        }
    }
}

TEST(Pointer, WernerEstimate) {
    const auto readouts = estimate_weak_values(named_states::werner(0.5), SimConfig{});
    const WeakValueSet wv = to_weak_value_set(readouts);
    EXPECT_NEAR(std::abs(*wv.get(16) - 2.0 / 3.0), 0.0, 5e-3);
}

TEST(Pointer, MaximallyMixedEstimatesVanish) {
    const WeakValueSet wv = to_weak_value_set(estimate_weak_values(named_states::maximally_mixed(), SimConfig{}));
    for (int k : kInformativeOutcomes) EXPECT_LT(std::abs(*wv.get(k)), 1e-6);
}

TEST(Pointer, PureStateSingleBranch) {
    const TwoQubitState rho = random_pure(4).to_state();
    const PostSelectedPointer post = evolve_and_postselect(rho, build_hamiltonian(), SimConfig{}, OutcomeIndex(7));
    EXPECT_EQ(post.branches.size(), 1U);
}

TEST(Pointer, CsvDump) {
    const PointerWave wave = gaussian_pointer(1.0, PointerGrid(256, 10.0));
    std::ostringstream out;
    wave.write_csv(out);
    std::istringstream in(out.str());
    std::string header;
    std::getline(in, header);
    EXPECT_EQ(header, "x,re,im");
    int lines = 0;
    for (std::string line; std::getline(in, line);) ++lines;
    EXPECT_EQ(lines, 256);
}
