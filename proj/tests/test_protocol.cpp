#include <gtest/gtest.h>

#include "oracles.hpp"
#include "twocopy/errors.hpp"
#include "twocopy/protocol.hpp"

using namespace twocopy;

namespace {

// Half |Psi+><Psi+| plus half of one basis projector.
TwoQubitState psi_plus_mixed_with(int basis) {
    CMatrix m(4, 4);
    m(1, 1) = m(2, 2) = m(1, 2) = m(2, 1) = 0.25;
    m(static_cast<std::size_t>(basis), static_cast<std::size_t>(basis)) += 0.5;
    return TwoQubitState::validate(m);
}

}  // namespace

TEST(Protocol, HamiltonianEntries) {
    const WeakHamiltonian h = build_hamiltonian();
    ASSERT_EQ(h.matrix.rows(), 16U);
    EXPECT_EQ(h.matrix(0b0001, 0b0000), Complex(1.0));
    EXPECT_EQ(h.matrix(0b1100, 0b1111), Complex(1.0));
    EXPECT_LT(max_abs_diff(h.matrix * h.matrix, CMatrix::identity(16)), 1e-15);
    for (int a = 0; a < 16; ++a)
        for (int b = 0; b < 16; ++b) EXPECT_EQ(h.matrix(a, b), oracle::hamiltonian_entry(a, b)) << a << "," << b;
}

TEST(Protocol, LocalHamiltonian) {
    const CMatrix expected = kron(CMatrix::identity(8), pauli::x());
    EXPECT_EQ(build_local_hamiltonian().matrix, expected);
}

TEST(Protocol, WeakValueExamples) {
    const TwoQubitState werner = named_states::werner(0.5);
    EXPECT_NEAR(std::abs(exact_weak_value(werner, build_hamiltonian(), OutcomeIndex(16)) - 2.0 / 3.0), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(exact_weak_value(werner, build_hamiltonian(), OutcomeIndex(1))), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(exact_weak_value(named_states::bell_phi_plus(), build_hamiltonian(), OutcomeIndex(16)) - 1.0),
                0.0, 1e-15);
}

TEST(Protocol, NoSignalOnVanishingDenominator) {
    EXPECT_THROW(exact_weak_value(named_states::bell_phi_plus(), build_hamiltonian(), OutcomeIndex(2)), NoSignalError);
}

TEST(Protocol, OutcomeIndexRange) {
    EXPECT_THROW(OutcomeIndex(0), DimensionError);
    EXPECT_THROW(OutcomeIndex(17), DimensionError);
    EXPECT_EQ(OutcomeIndex(14).first_copy(), 3);
    EXPECT_EQ(OutcomeIndex(14).second_copy(), 1);
}

TEST(Protocol, WeakValuesMatchExplicitSums) {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const TwoQubitState rho = random_mixed(seed);
        const WeakValueSet wv = weak_values_all(rho);
        ASSERT_EQ(wv.defined_count(), 16);
        for (int k = 1; k <= 16; ++k) {
            EXPECT_LT(std::abs(*wv.get(k) - oracle::two_copy_weak_value(rho.matrix(), k)), 1e-12);
        }
    }
}

TEST(Protocol, WeakValuesMatchElementRatios) {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const TwoQubitState rho = random_mixed(seed);
        const CMatrix& m = rho.matrix();
        const WeakValueSet wv = weak_values_all(rho);
        const std::array<std::pair<int, Complex>, 12> expected{{
            {1, std::conj(m(0, 1)) / m(0, 0)},
            {2, m(0, 1) / m(1, 1)},
            {3, std::conj(m(2, 3)) / m(2, 2)},
            {4, m(2, 3) / m(3, 3)},
            {9, std::conj(m(0, 2)) / m(0, 0)},
            {10, std::conj(m(1, 3)) / m(1, 1)},
            {11, m(0, 2) / m(2, 2)},
            {12, m(1, 3) / m(3, 3)},
            {13, std::conj(m(0, 3)) / m(0, 0)},
            {14, std::conj(m(1, 2)) / m(1, 1)},
            {15, m(1, 2) / m(2, 2)},
            {16, m(0, 3) / m(3, 3)},
        }};
        for (const auto& [k, value] : expected) EXPECT_LT(std::abs(*wv.get(k) - value), 1e-12) << k;
        for (int k = 5; k <= 8; ++k) EXPECT_LT(std::abs(*wv.get(k) - *wv.get(k - 4)), 1e-12);
        EXPECT_LT(max_identity_residual(rho, wv), 1e-12);
        // conj(u*/p) p = (u/q) q
        EXPECT_LT(std::abs(std::conj(*wv.get(1)) * m(0, 0) - *wv.get(2) * m(1, 1)), 1e-12);
    }
}

TEST(Protocol, MaximallyMixedWeakValuesVanish) {
    const WeakValueSet wv = weak_values_all(named_states::maximally_mixed());
    for (int k : kInformativeOutcomes) EXPECT_EQ(*wv.get(k), Complex(0.0));
}

TEST(Protocol, DiagonalsFromPostselection) {
    const TwoQubitState werner = named_states::werner(0.5);
    EXPECT_NEAR(postselection_probability(werner, OutcomeIndex(1)), 9.0 / 64.0, 1e-16);
    EXPECT_NEAR(diagonals_from_postselection(werner).p, 3.0 / 8.0, 1e-16);

    const Diagonals mm = diagonals_from_postselection(named_states::maximally_mixed());
    EXPECT_DOUBLE_EQ(mm.p, 0.25);
    EXPECT_DOUBLE_EQ(mm.s, 0.25);

    const Diagonals b = diagonals_from_postselection(named_states::basis(1));
    EXPECT_DOUBLE_EQ(b.p, 0.0);
    EXPECT_DOUBLE_EQ(b.q, 1.0);
    EXPECT_DOUBLE_EQ(b.r, 0.0);
    EXPECT_DOUBLE_EQ(b.s, 0.0);
}

TEST(Protocol, RatioChainAgreesWithPostselection) {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const TwoQubitState rho = random_mixed(seed);
        const Diagonals chain = diagonals_from_ratio_chain(weak_values_all(rho));
        EXPECT_NEAR(chain.p, rho.p(), 1e-8);
        EXPECT_NEAR(chain.q, rho.q(), 1e-8);
        EXPECT_NEAR(chain.r, rho.r(), 1e-8);
        EXPECT_NEAR(chain.s, rho.s(), 1e-8);
    }
}

TEST(Protocol, BracketTableHasTwentyFourTerms) {
    const auto& terms = bracket_terms();
    EXPECT_EQ(terms.size(), 24U);
    const TwoQubitState rho = random_mixed(17);
    const Diagonals diag = diagonals_from_postselection(rho);
    const double bracket = bracket_from_ratios(ratios_from_weak_values(weak_values_all(rho), diag), diag);
    const double expected = oracle::leibniz_det(oracle::index_rule_pt(rho.matrix())).real();
    EXPECT_NEAR(bracket * diag.product(), expected, 1e-10 * std::abs(expected));
}

TEST(Protocol, DetectBellIsCaseTwo) {
    const DetectionReport report = detect(named_states::bell_phi_plus());
    EXPECT_EQ(report.verdict, Verdict::Entangled);
    EXPECT_EQ(report.path, DecisionPath::CaseII);
    ASSERT_TRUE(report.det_value);
    EXPECT_NEAR(*report.det_value, -1.0 / 16.0, 1e-15);
    EXPECT_NEAR(report.e_estimate, 1.0 / 16.0, 1e-15);
}

TEST(Protocol, DetectBasisStateIsCaseOneSeparable) {
    const DetectionReport report = detect(named_states::basis(1));
    EXPECT_EQ(report.path, DecisionPath::CaseI);
    EXPECT_EQ(report.verdict, Verdict::Separable);
}

TEST(Protocol, DetectWernerGeneral) {
    const DetectionReport sep = detect(named_states::werner(0.2));
    EXPECT_EQ(sep.path, DecisionPath::General);
    EXPECT_EQ(sep.verdict, Verdict::Separable);
    ASSERT_TRUE(sep.det_value);
    EXPECT_NEAR(*sep.det_value, oracle::werner_det(0.2), 1e-15);
    EXPECT_NEAR(*sep.det_value, 2.7e-3, 1e-15);

    EXPECT_EQ(detect(named_states::werner(1.0 / 3.0 - 1e-6)).verdict, Verdict::Separable);
    EXPECT_EQ(detect(named_states::werner(1.0 / 3.0 + 1e-3)).verdict, Verdict::Entangled);
}

TEST(Protocol, CaseOneWithVanishingS) {
    // p > 0, s = 0: x can only be read through the relocated Hamiltonian.
    const TwoQubitState rho = psi_plus_mixed_with(0);
    const double expected = oracle::leibniz_det(oracle::index_rule_pt(rho.matrix())).real();
    EXPECT_NEAR(expected, -1.0 / 256.0, 1e-15);
    const DetectionReport report = detect(rho);
    EXPECT_EQ(report.path, DecisionPath::CaseI);
    EXPECT_EQ(report.verdict, Verdict::Entangled);
    ASSERT_TRUE(report.det_value);
    EXPECT_NEAR(*report.det_value, expected, 1e-15);
    EXPECT_EQ(report.probe_outcome, kRelocatedProbeOutcome);
    EXPECT_EQ(report.probe_hamiltonian, HamiltonianKind::Relocated);
}

TEST(Protocol, CaseOneWithVanishingP) {
    const TwoQubitState rho = psi_plus_mixed_with(3);
    const DetectionReport report = detect(rho);
    EXPECT_EQ(report.path, DecisionPath::CaseI);
    EXPECT_EQ(report.verdict, Verdict::Entangled);
    EXPECT_EQ(report.probe_outcome, 14);
    ASSERT_TRUE(report.det_value);
    EXPECT_NEAR(*report.det_value, oracle::leibniz_det(oracle::index_rule_pt(rho.matrix())).real(), 1e-15);
}

TEST(Protocol, CaseOneSinglet) {
    // p = s = 0 with q, r > 0.
    const TwoQubitState singlet = PureAmplitudes::make(0.0, M_SQRT1_2, -M_SQRT1_2, 0.0).to_state();
    const DetectionReport report = detect(singlet);
    EXPECT_EQ(report.path, DecisionPath::CaseI);
    EXPECT_EQ(report.verdict, Verdict::Entangled);
    EXPECT_NEAR(*report.det_value, -1.0 / 16.0, 1e-15);
}

TEST(Protocol, CaseTwoSeparable) {
    // q = r = 0 with no coherence between |00> and |11>.
    const TwoQubitState rho = TwoQubitState::validate(CMatrix::diagonal({0.5, 0.0, 0.0, 0.5}));
    const DetectionReport report = detect(rho);
    EXPECT_EQ(report.path, DecisionPath::CaseII);
    EXPECT_EQ(report.verdict, Verdict::Separable);
}

TEST(Protocol, ToleranceOverride) {
    Tolerances loose;
    loose.det = 1.0;
    EXPECT_EQ(detect(named_states::werner(0.5), loose).verdict, Verdict::Separable);
}

TEST(Protocol, ReconstructRoundTrip) {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const TwoQubitState rho = random_mixed(seed);
        const TwoQubitState rebuilt = reconstruct(weak_values_all(rho), diagonals_from_postselection(rho));
        EXPECT_LT(trace_distance(rho, rebuilt), 1e-8);
    }
}

TEST(Protocol, ReconstructNamedStates) {
    const TwoQubitState mm = named_states::maximally_mixed();
    EXPECT_EQ(reconstruct(weak_values_all(mm), diagonals_from_postselection(mm)).matrix(), mm.matrix());

    const TwoQubitState bell = named_states::bell_phi_plus();
    const TwoQubitState rebuilt = reconstruct(weak_values_all(bell), diagonals_from_postselection(bell));
    EXPECT_LT(oracle::max_entry_diff(rebuilt.matrix(), bell.matrix()), 1e-15);
}

TEST(Protocol, ReconstructRejectsInconsistentData) {
    WeakValueSet wv;
    wv.set(OutcomeIndex(16), 10.0);
    const Diagonals diag{0.5, 0.0, 0.0, 0.5};
    EXPECT_THROW(reconstruct(wv, diag), Error);
}

TEST(Protocol, PureLocalExamples) {
    const DetectionReport bell = detect_pure_local(PureAmplitudes::make(M_SQRT1_2, 0.0, 0.0, M_SQRT1_2));
    EXPECT_EQ(bell.verdict, Verdict::Entangled);
    EXPECT_EQ(bell.path, DecisionPath::PureLocal);
    EXPECT_EQ(detect_pure_local(PureAmplitudes::make(M_SQRT1_2, 0.0, M_SQRT1_2, 0.0)).verdict, Verdict::Separable);

    const PureAmplitudes mixed_sign = PureAmplitudes::make(0.5, 0.5, 0.5, -0.5);
    const DetectionReport report = detect_pure_local(mixed_sign);
    EXPECT_EQ(report.verdict, Verdict::Entangled);
    const TwoQubitState rho = mixed_sign.to_state();
    const CMatrix h = build_local_hamiltonian().matrix;
    EXPECT_NEAR(std::abs(exact_weak_value(rho, h, OutcomeIndex(2)) - 1.0), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(exact_weak_value(rho, h, OutcomeIndex(4)) + 1.0), 0.0, 1e-14);
}

TEST(Protocol, PureLocalAgreesWithMinor) {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const PureAmplitudes psi = random_pure(seed);
        const Verdict expected =
            std::abs(psi.a * psi.d - psi.b * psi.c) > kWeakValueTol ? Verdict::Entangled : Verdict::Separable;
        EXPECT_EQ(detect_pure_local(psi).verdict, expected);
        EXPECT_EQ(detect_pure_local(random_product_pure(seed)).verdict, Verdict::Separable);
    }
}
