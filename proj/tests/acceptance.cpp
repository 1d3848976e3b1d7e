// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits non-zero if any criterion fails.

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "twocopy/circuit.hpp"
#include "twocopy/pointer.hpp"
#include "twocopy/protocol.hpp"
#include "twocopy/robustness.hpp"
#include "twocopy/states.hpp"

using namespace twocopy;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

Outcome verdict_universality() {
    const auto start = std::chrono::steady_clock::now();
    int mismatches = 0, near = 0, entangled = 0;
    for (std::uint64_t i = 0; i < 1000; ++i) {
        const TwoQubitState rho = random_mixed(derive_seed(0, i));
        const Verdict truth = ppt_oracle(rho);
        const Verdict got = detect(rho).verdict;
        if (std::abs(det_ptb(rho)) <= kDetTol) {
            ++near;
            continue;
        }
        if (truth == Verdict::Entangled) ++entangled;
        if (truth != got) ++mismatches;
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::ostringstream d;
    d << "mismatches=" << mismatches << " near_threshold=" << near << " entangled=" << entangled
      << " time=" << fmt(seconds) << "s";
    return {mismatches == 0 && seconds < 10.0, d.str()};
}

Outcome expansion_fidelity() {
    double worst = 0.0;
    for (std::uint64_t i = 0; i < 1000; ++i) {
        const TwoQubitState rho = random_mixed(derive_seed(2, i));
        const double lu = det_ptb(rho);
        worst = std::max(worst, std::abs(det_ptb_expansion(rho) - lu) / std::abs(lu));
    }
    return {worst <= 1e-10, "max_rel_error=" + fmt(worst)};
}

Outcome weak_value_identities() {
    double worst = 0.0, redundancy = 0.0;
    for (std::uint64_t i = 0; i < 200; ++i) {
        const TwoQubitState rho = random_mixed(derive_seed(3, i));
        const WeakValueSet wv = weak_values_all(rho);
        const CMatrix& m = rho.matrix();
        const std::array<std::pair<int, Complex>, 12> expected{{
            {1, std::conj(m(0, 1)) / m(0, 0)},  {2, m(0, 1) / m(1, 1)},
            {3, std::conj(m(2, 3)) / m(2, 2)},  {4, m(2, 3) / m(3, 3)},
            {9, std::conj(m(0, 2)) / m(0, 0)},  {10, std::conj(m(1, 3)) / m(1, 1)},
            {11, m(0, 2) / m(2, 2)},            {12, m(1, 3) / m(3, 3)},
            {13, std::conj(m(0, 3)) / m(0, 0)}, {14, std::conj(m(1, 2)) / m(1, 1)},
            {15, m(1, 2) / m(2, 2)},            {16, m(0, 3) / m(3, 3)},
        }};
        for (const auto& [k, value] : expected) worst = std::max(worst, std::abs(*wv.get(k) - value));
        for (int k = 5; k <= 8; ++k) redundancy = std::max(redundancy, std::abs(*wv.get(k) - *wv.get(k - 4)));
    }
    return {worst <= 1e-12 && redundancy <= 1e-12,
            "max_identity_error=" + fmt(worst) + " max_redundancy_gap=" + fmt(redundancy)};
}

Outcome tomography_round_trip() {
    double worst = 0.0;
    for (std::uint64_t i = 0; i < 1000; ++i) {
        const TwoQubitState rho = random_mixed(derive_seed(4, i));
        worst = std::max(worst, trace_distance(rho, reconstruct(weak_values_all(rho), diagonals_from_postselection(rho))));
    }
    double diag_worst = 0.0;
    std::vector<TwoQubitState> diagonal{named_states::maximally_mixed()};
    for (int b = 0; b < 4; ++b) diagonal.push_back(named_states::basis(b));
    for (std::uint64_t i = 0; i < 20; ++i) {
        const auto d = random_mixed(derive_seed(44, i)).diagonal();
        diagonal.push_back(TwoQubitState::validate(CMatrix::diagonal({d[0], d[1], d[2], d[3]})));
    }
    for (const TwoQubitState& rho : diagonal) {
        const TwoQubitState rebuilt = reconstruct(weak_values_all(rho), diagonals_from_postselection(rho));
        diag_worst = std::max(diag_worst, oracle::max_entry_diff(rebuilt.matrix(), rho.matrix()));
    }
    return {worst <= 1e-8 && diag_worst <= 1e-15,
            "max_trace_distance=" + fmt(worst) + " diagonal_max_entry_error=" + fmt(diag_worst)};
}

Outcome named_states_check() {
    const double bell_det = det_ptb(named_states::bell_phi_plus());
    const double bell_neg = negativity(named_states::bell_phi_plus());
    const Verdict below = detect(named_states::werner(1.0 / 3.0 - 1e-6)).verdict;
    const Verdict above = detect(named_states::werner(1.0 / 3.0 + 1e-3)).verdict;
    const bool pass = std::abs(bell_det + 1.0 / 16.0) <= 1e-12 && std::abs(bell_neg - 0.5) <= 1e-12 &&
                      below == Verdict::Separable && above == Verdict::Entangled;
    std::ostringstream d;
    d << "bell_det=" << fmt(bell_det) << " bell_negativity=" << fmt(bell_neg) << " werner(1/3-1e-6)=" << to_string(below)
      << " werner(1/3+1e-3)=" << to_string(above);
    return {pass, d.str()};
}

Outcome pointer_convergence() {
    const double eps = 1e-3;
    const SimConfig full{eps, 1.0, 4096, 40.0}, half{eps / 2.0, 1.0, 4096, 40.0}, zero{0.0, 1.0, 4096, 40.0};
    double worst_error = 0.0, min_ratio = 1e300, max_ratio = 0.0;
    for (std::uint64_t i = 0; i < 50; ++i) {
        const TwoQubitState rho = random_mixed(derive_seed(6, i));
        const WeakValueSet exact = weak_values_all(rho);
        const auto a = estimate_weak_values(rho, full);
        const auto b = estimate_weak_values(rho, half);
        double err = 0.0, err_half = 0.0;
        for (std::size_t j = 0; j < a.size(); ++j) {
            const Complex truth = *exact.get(a[j].k);
            err = std::max(err, std::abs(a[j].estimate - truth));
            err_half = std::max(err_half, std::abs(b[j].estimate - truth));
        }
        worst_error = std::max(worst_error, err);
        const double ratio = err / err_half;
        min_ratio = std::min(min_ratio, ratio);
        max_ratio = std::max(max_ratio, ratio);
    }
    double prob_error = 0.0;
    for (std::uint64_t i = 0; i < 10; ++i) {
        const TwoQubitState rho = random_mixed(derive_seed(66, i));
        for (int k = 1; k <= 16; ++k) {
            const double p = evolve_and_postselect(rho, build_hamiltonian(), zero, OutcomeIndex(k)).probability;
            const double truth = (rho.matrix()((k - 1) >> 2, (k - 1) >> 2) * rho.matrix()((k - 1) & 3, (k - 1) & 3)).real();
            prob_error = std::max(prob_error, std::abs(p - truth));
        }
    }
    const bool pass = worst_error <= 5.0 * eps && min_ratio >= 1.7 && max_ratio <= 4.3 && prob_error <= 1e-12;
    return {pass, "max_error=" + fmt(worst_error) + " ratio_range=[" + fmt(min_ratio) + ", " + fmt(max_ratio) +
                      "] eps0_prob_error=" + fmt(prob_error)};
}

Outcome circuit_equivalence() {
    const CMatrix h = build_hamiltonian().matrix;
    double circuit = 0.0, expm = 0.0;
    for (double eps : {1e-3, 0.1, 1.0}) {
        circuit = std::max(circuit, verify_equivalence(eps));
        expm = std::max(expm, max_abs_diff(coupling_unitary(eps), expm_hermitian(h, {0.0, -eps})));
    }
    return {circuit <= 1e-12 && expm <= 1e-12, "circuit_vs_U=" + fmt(circuit) + " U_vs_expm=" + fmt(expm)};
}

Outcome robustness_bound() {
    long violations = 0, checks = 0;
    double min_margin = 1e300;
    for (double delta : {1e-3, 1e-2}) {
        for (std::uint64_t i = 0; i < 100; ++i) {
            const TwoQubitState rho = random_mixed(derive_seed(8, i));
            const RobustnessReport r = bound_check(rho, delta, 100, derive_seed(88, i));
            violations += r.violations;
            checks += r.checks;
            min_margin = std::min(min_margin, r.margin / r.bound);
        }
    }
    double linearity = 0.0;
    const WeakHamiltonian h = build_hamiltonian();
    for (std::uint64_t i = 0; i < 20; ++i) {
        const TwoQubitState rho = random_mixed(derive_seed(9, i));
        const Perturbation p = random_perturbation(1e-2, derive_seed(99, i));
        const Perturbation p3{Complex{3.0} * p.matrix, 3e-2};
        for (int k = 1; k <= 16; ++k) {
            const double d1 = weak_value_deviation(rho, h, p, OutcomeIndex(k));
            const double d3 = weak_value_deviation(rho, h, p3, OutcomeIndex(k));
            linearity = std::max(linearity, std::abs(d3 - 3.0 * d1));
        }
    }
    std::ostringstream d;
    d << "checks=" << checks << " violations=" << violations << " min_relative_margin=" << fmt(min_margin)
      << " linearity_error=" << fmt(linearity);
    return {violations == 0 && checks == 2L * 100 * 100 * 16 && linearity <= 1e-10, d.str()};
}

Outcome pure_local() {
    int mismatches = 0, separable = 0;
    auto check = [&](const PureAmplitudes& psi) {
        const Verdict truth =
            std::abs(psi.a * psi.d - psi.b * psi.c) > kWeakValueTol ? Verdict::Entangled : Verdict::Separable;
        const Verdict got = detect_pure_local(psi).verdict;
        if (got == Verdict::Separable) ++separable;
        if (got != truth) ++mismatches;
    };
    for (std::uint64_t i = 0; i < 1000; ++i) check(random_pure(derive_seed(10, i)));
    for (std::uint64_t i = 0; i < 100; ++i) check(random_product_pure(derive_seed(11, i)));
    return {mismatches == 0 && separable == 100,
            "mismatches=" + std::to_string(mismatches) + " separable_verdicts=" + std::to_string(separable)};
}

std::string capture(const std::string& command, int& status) {
    std::string out;
    FILE* pipe = popen(command.c_str(), "r");
    if (!pipe) {
        status = -1;
        return out;
    }
    std::array<char, 4096> buf{};
    std::size_t n;
    while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
    status = pclose(pipe);
    return out;
}

Outcome cli_determinism(const std::string& cli) {
    if (cli.empty()) return {false, "no CLI path given"};
    const std::string command = "'" + cli + "' benchmark --seed 7";
    int s1 = 0, s2 = 0;
    const std::string a = capture(command, s1), b = capture(command, s2);
    const bool pass = s1 == 0 && s2 == 0 && !a.empty() && a == b;
    return {pass, "bytes=" + std::to_string(a.size()) + " identical=" + (a == b ? "yes" : "no") +
                      " exit=" + std::to_string(s1) + "," + std::to_string(s2)};
}

}  // namespace

int main(int argc, char** argv) {
    const std::string cli = argc > 1 ? argv[1] : "";
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"verdict universality", verdict_universality},
        {"determinant expansion fidelity", expansion_fidelity},
        {"weak-value identities", weak_value_identities},
        {"tomography round trip", tomography_round_trip},
        {"named-state values", named_states_check},
        {"pointer convergence", pointer_convergence},
        {"circuit equivalence", circuit_equivalence},
        {"robustness bound", robustness_bound},
        {"pure-local protocol", pure_local},
        {"CLI determinism", [&] { return cli_determinism(cli); }},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        const auto start = std::chrono::steady_clock::now();
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (!o.pass) ++failures;
        std::cout << (o.pass ? "PASS" : "FAIL") << "  " << (i + 1) << ". " << criteria[i].first << ": " << o.detail
                  << " (" << fmt(seconds) << "s)" << std::endl;
    }
    std::cout << (criteria.size() - static_cast<std::size_t>(failures)) << "/" << criteria.size()
              << " criteria passed" << std::endl;
    return failures == 0 ? 0 : 1;
}
