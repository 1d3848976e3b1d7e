#include "twocopy/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace twocopy {

namespace {

CMatrix block_operator(BlockOperator op) {
    switch (op) {
        case BlockOperator::FlipSecondQubit: return kron(pauli::identity2(), pauli::x());
        case BlockOperator::FlipFirstQubit: return kron(pauli::x(), pauli::identity2());
        case BlockOperator::FlipBoth: return kron(pauli::x(), pauli::x());
    }
    throw Error("unknown block operator");
}

CMatrix two_copy(const TwoQubitState& rho) { return kron(rho.matrix(), rho.matrix()); }

Complex weak_value_from_joint(const CMatrix& joint, const CMatrix& h, OutcomeIndex k,
                              double den_tol) {
    const std::size_t idx = k.basis_index();
    const double den = joint(idx, idx).real();
    if (!(den > den_tol)) throw NoSignalError(k.k(), den);
    Complex num{0.0, 0.0};
    for (std::size_t j = 0; j < 16; ++j) num += h(idx, j) * joint(j, idx);
    return num / den;
}

// Conjugate partner of each ratio and the diagonals in both denominators:
// ratio = conj(partner) * partner_den / own_den.
struct RatioPairing {
    Ratio partner;
    int own_den;      // 0..3 -> p, q, r, s
    int partner_den;
};

constexpr std::array<RatioPairing, 12> kPairings{{
    {Ratio::UOverQ, 0, 1},      // u*/p = conj(u/q) q/p
    {Ratio::UConjOverP, 1, 0},  // u/q = conj(u*/p) p/q
    {Ratio::ZOverS, 2, 3},      // z*/r = conj(z/s) s/r
    {Ratio::ZConjOverR, 3, 2},  // z/s = conj(z*/r) r/s
    {Ratio::VOverR, 0, 2},      // v*/p = conj(v/r) r/p
    {Ratio::YOverS, 1, 3},      // y*/q = conj(y/s) s/q
    {Ratio::VConjOverP, 2, 0},  // v/r = conj(v*/p) p/r
    {Ratio::YConjOverQ, 3, 1},  // y/s = conj(y*/q) q/s
    {Ratio::WOverS, 0, 3},      // w*/p = conj(w/s) s/p
    {Ratio::XOverR, 1, 2},      // x*/q = conj(x/r) r/q
    {Ratio::XConjOverQ, 2, 1},  // x/r = conj(x*/q) q/r
    {Ratio::WConjOverP, 3, 0},  // w/s = conj(w*/p) p/s
}};

constexpr std::array<int, 12> kRatioOutcomes{1, 2, 3, 4, 9, 10, 11, 12, 13, 14, 15, 16};

double diag_at(const Diagonals& d, int i) {
    switch (i) {
        case 0: return d.p;
        case 1: return d.q;
        case 2: return d.r;
        default: return d.s;
    }
}

constexpr RatioFactor f(Ratio r) { return {r, false}; }
constexpr RatioFactor fc(Ratio r) { return {r, true}; }

}  // namespace

std::string_view to_string(HamiltonianKind kind) {
    switch (kind) {
        case HamiltonianKind::General: return "General";
        case HamiltonianKind::PureLocal: return "PureLocal";
        case HamiltonianKind::Relocated: return "Relocated";
    }
    return "unknown";
}

std::string_view to_string(DecisionPath path) {
    switch (path) {
        case DecisionPath::General: return "General";
        case DecisionPath::CaseI: return "CaseI";
        case DecisionPath::CaseII: return "CaseII";
        case DecisionPath::PureLocal: return "PureLocal";
    }
    return "unknown";
}

std::string_view to_string(Ratio ratio) {
    static constexpr std::array<std::string_view, 12> kNames{
        "u*/p", "u/q", "z*/r", "z/s", "v*/p", "y*/q", "v/r", "y/s", "w*/p", "x*/q", "x/r", "w/s"};
    return kNames[static_cast<std::size_t>(ratio)];
}

int outcome_of(Ratio ratio) { return kRatioOutcomes[static_cast<std::size_t>(ratio)]; }

WeakHamiltonian build_block_hamiltonian(const std::array<BlockOperator, 4>& layout) {
    CMatrix h(16, 16);
    for (int block = 0; block < 4; ++block) {
        CMatrix projector(4, 4);
        projector(block, block) = 1.0;
        h += kron(projector, block_operator(layout[block]));
    }
    return {std::move(h), HamiltonianKind::Relocated};
}

WeakHamiltonian build_hamiltonian() {
    WeakHamiltonian h = build_block_hamiltonian(
        {BlockOperator::FlipSecondQubit, BlockOperator::FlipSecondQubit,
         BlockOperator::FlipFirstQubit, BlockOperator::FlipBoth});
    h.kind = HamiltonianKind::General;
    return h;
}

WeakHamiltonian build_local_hamiltonian() {
    const CMatrix i2 = pauli::identity2();
    return {kron(kron(i2, i2), kron(i2, pauli::x())), HamiltonianKind::PureLocal};
}

double postselection_probability(const TwoQubitState& rho, OutcomeIndex k) {
    const CMatrix& m = rho.matrix();
    return m(k.first_copy(), k.first_copy()).real() * m(k.second_copy(), k.second_copy()).real();
}

Complex exact_weak_value(const TwoQubitState& rho, const CMatrix& hamiltonian, OutcomeIndex k,
                         double den_tol) {
    if (hamiltonian.rows() != 16 || hamiltonian.cols() != 16) {
        throw DimensionError("weak-value Hamiltonian must be 16x16");
    }
    return weak_value_from_joint(two_copy(rho), hamiltonian, k, den_tol);
}

Complex exact_weak_value(const TwoQubitState& rho, const WeakHamiltonian& h, OutcomeIndex k,
                         double den_tol) {
    return exact_weak_value(rho, h.matrix, k, den_tol);
}

int WeakValueSet::defined_count() const {
    return static_cast<int>(std::count_if(values_.begin(), values_.end(),
                                          [](const auto& v) { return v.has_value(); }));
}

WeakValueSet weak_values_all(const TwoQubitState& rho, const WeakHamiltonian& h, double den_tol) {
    const CMatrix joint = two_copy(rho);
    WeakValueSet out;
    for (int k = 1; k <= 16; ++k) {
        try {
            out.set(OutcomeIndex(k), weak_value_from_joint(joint, h.matrix, OutcomeIndex(k), den_tol));
        } catch (const NoSignalError&) {
            // left undefined
        }
    }
    return out;
}

WeakValueSet weak_values_all(const TwoQubitState& rho, double den_tol) {
    static const WeakHamiltonian h = build_hamiltonian();
    return weak_values_all(rho, h, den_tol);
}

std::optional<Complex> expected_ratio(const TwoQubitState& rho, OutcomeIndex k) {
    const int kk = (k.k() >= 5 && k.k() <= 8) ? k.k() - 4 : k.k();
    Complex num;
    double den = 0.0;
    switch (kk) {
        case 1: num = std::conj(rho.u()); den = rho.p(); break;
        case 2: num = rho.u(); den = rho.q(); break;
        case 3: num = std::conj(rho.z()); den = rho.r(); break;
        case 4: num = rho.z(); den = rho.s(); break;
        case 9: num = std::conj(rho.v()); den = rho.p(); break;
        case 10: num = std::conj(rho.y()); den = rho.q(); break;
        case 11: num = rho.v(); den = rho.r(); break;
        case 12: num = rho.y(); den = rho.s(); break;
        case 13: num = std::conj(rho.w()); den = rho.p(); break;
        case 14: num = std::conj(rho.x()); den = rho.q(); break;
        case 15: num = rho.x(); den = rho.r(); break;
        case 16: num = rho.w(); den = rho.s(); break;
        default: return std::nullopt;
    }
    if (den <= 0.0) return std::nullopt;
    return num / den;
}

double max_identity_residual(const TwoQubitState& rho, const WeakValueSet& wv) {
    double worst = 0.0;
    for (int k = 1; k <= 16; ++k) {
        const auto measured = wv.get(k);
        const auto expected = expected_ratio(rho, OutcomeIndex(k));
        if (measured && expected) worst = std::max(worst, std::abs(*measured - *expected));
    }
    return worst;
}

double Diagonals::min() const { return std::min({p, q, r, s}); }

Diagonals diagonals_from_probabilities(const std::array<double, 16>& probabilities) {
    auto root = [](double pr) { return std::sqrt(std::max(0.0, pr)); };
    return {root(probabilities[0]), root(probabilities[5]), root(probabilities[10]),
            root(probabilities[15])};
}

Diagonals diagonals_from_postselection(const TwoQubitState& rho) {
    std::array<double, 16> probabilities{};
    for (int k = 1; k <= 16; ++k) {
        probabilities[k - 1] = postselection_probability(rho, OutcomeIndex(k));
    }
    return diagonals_from_probabilities(probabilities);
}

Diagonals diagonals_from_ratio_chain(const WeakValueSet& wv) {
    // (a*/p) / conj(a/d) = d/p for a in {u, v, w}, d in {q, r, s}.
    auto quotient = [&](int conj_over_p, int over_d, const char* name) {
        const auto lhs = wv.get(conj_over_p);
        const auto rhs = wv.get(over_d);
        if (!lhs || !rhs || std::abs(*rhs) < 1e-300 || std::abs(*lhs) < 1e-300) {
            throw Error(std::string("ratio chain undefined: ") + name + " vanishes or has no signal");
        }
        return (*lhs / std::conj(*rhs)).real();
    };
    const double q_over_p = quotient(1, 2, "u");
    const double r_over_p = quotient(9, 11, "v");
    const double s_over_p = quotient(13, 16, "w");
    const double p = 1.0 / (1.0 + q_over_p + r_over_p + s_over_p);
    return {p, q_over_p * p, r_over_p * p, s_over_p * p};
}

RatioSet ratios_from_weak_values(const WeakValueSet& wv, const Diagonals& diag) {
    RatioSet out;
    for (std::size_t i = 0; i < 12; ++i) {
        if (const auto own = wv.get(kRatioOutcomes[i])) {
            out.values[i] = *own;
            continue;
        }
        const RatioPairing& pair = kPairings[i];
        const auto partner = wv.get(kRatioOutcomes[static_cast<std::size_t>(pair.partner)]);
        const double own_den = diag_at(diag, pair.own_den);
        if (partner && own_den > 0.0) {
            out.values[i] = std::conj(*partner) * diag_at(diag, pair.partner_den) / own_den;
        }
        // Neither outcome had a signal: |a|^2 <= d1 d2 makes the ratio negligible.
    }
    return out;
}

const std::array<BracketTerm, 24>& bracket_terms() {
    using R = Ratio;
    using Q = DiagonalQuotient;
    static const std::array<BracketTerm, 24> kTerms{{
        {+1, {f(R::UConjOverP), f(R::UOverQ), f(R::ZConjOverR), f(R::ZOverS)}, Q::None},     // uu*zz*/pqrs
        {-1, {f(R::UOverQ), fc(R::VConjOverP), fc(R::YOverS), f(R::ZConjOverR)}, Q::None},   // uvy*z*/pqrs
        {-1, {f(R::WConjOverP), f(R::UOverQ), f(R::XOverR), f(R::ZOverS)}, Q::None},         // uw*xz/pqrs
        {-1, {f(R::UConjOverP), fc(R::VOverR), fc(R::YConjOverQ), f(R::ZOverS)}, Q::None},   // u*v*yz/pqrs
        {-1, {f(R::UConjOverP), f(R::XConjOverQ), f(R::ZConjOverR), f(R::WOverS)}, Q::None}, // u*wx*z*/pqrs
        {+1, {f(R::VConjOverP), f(R::YConjOverQ), f(R::VOverR), f(R::YOverS)}, Q::None},     // vv*yy*/pqrs
        {-1, {f(R::WConjOverP), f(R::XConjOverQ), f(R::VOverR), f(R::YOverS)}, Q::None},     // vw*x*y/pqrs
        {-1, {f(R::VConjOverP), f(R::YConjOverQ), f(R::XOverR), f(R::WOverS)}, Q::None},     // v*wxy*/pqrs
        {+1, {f(R::WConjOverP), f(R::XConjOverQ), f(R::XOverR), f(R::WOverS)}, Q::None},     // ww*xx*/pqrs
        {+1, {f(R::WConjOverP), f(R::UOverQ), f(R::VOverR), std::nullopt}, Q::None},         // uvw*/pqr
        {+1, {fc(R::WConjOverP), fc(R::UOverQ), fc(R::VOverR), std::nullopt}, Q::None},      // u*v*w/pqr
        {+1, {fc(R::UConjOverP), fc(R::XConjOverQ), fc(R::YOverS), std::nullopt}, Q::None},  // uxy*/pqs
        {+1, {f(R::UConjOverP), f(R::XConjOverQ), f(R::YOverS), std::nullopt}, Q::None},     // u*x*y/pqs
        {-1, {f(R::UConjOverP), f(R::UOverQ), std::nullopt, std::nullopt}, Q::None},         // uu*/pq
        {+1, {fc(R::VConjOverP), fc(R::XOverR), fc(R::ZOverS), std::nullopt}, Q::None},      // vx*z*/prs
        {+1, {f(R::VConjOverP), f(R::XOverR), f(R::ZOverS), std::nullopt}, Q::None},         // v*xz/prs
        {-1, {f(R::VConjOverP), f(R::VOverR), std::nullopt, std::nullopt}, Q::None},         // vv*/pr
        {-1, {f(R::XConjOverQ), f(R::XOverR), std::nullopt, std::nullopt}, Q::QROverPS},     // xx*/ps
        {+1, {f(R::YConjOverQ), f(R::ZConjOverR), f(R::WOverS), std::nullopt}, Q::None},     // wy*z*/qrs
        {+1, {fc(R::YConjOverQ), fc(R::ZConjOverR), fc(R::WOverS), std::nullopt}, Q::None},  // w*yz/qrs
        {-1, {f(R::WConjOverP), f(R::WOverS), std::nullopt, std::nullopt}, Q::PSOverQR},     // ww*/qr
        {-1, {f(R::YConjOverQ), f(R::YOverS), std::nullopt, std::nullopt}, Q::None},         // yy*/qs
        {-1, {f(R::ZConjOverR), f(R::ZOverS), std::nullopt, std::nullopt}, Q::None},         // zz*/rs
        {+1, {std::nullopt, std::nullopt, std::nullopt, std::nullopt}, Q::None},             // 1
    }};
    return kTerms;
}

double bracket_from_ratios(const RatioSet& ratios, const Diagonals& diag) {
    Complex sum{0.0, 0.0};
    for (const BracketTerm& term : bracket_terms()) {
        Complex product{static_cast<double>(term.sign), 0.0};
        for (const auto& factor : term.factors) {
            if (!factor) continue;
            const Complex value = ratios[factor->ratio];
            product *= factor->conjugate ? std::conj(value) : value;
        }
        switch (term.quotient) {
            case DiagonalQuotient::None: break;
            case DiagonalQuotient::QROverPS: product *= (diag.q * diag.r) / (diag.p * diag.s); break;
            case DiagonalQuotient::PSOverQR: product *= (diag.p * diag.s) / (diag.q * diag.r); break;
        }
        sum += product;
    }
    return sum.real();
}

DetectionReport decide(const WeakValueSet& wv, const Diagonals& diag, const Tolerances& tol,
                       std::optional<Complex> relocated_probe) {
    DetectionReport report;
    report.weak_values = wv;
    auto vanishes = [&](double d) { return d < tol.diag; };
    auto nullity = [&](double magnitude) {
        return magnitude > tol.weak_value ? Verdict::Entangled : Verdict::Separable;
    };

    if (vanishes(diag.p) || vanishes(diag.s)) {
        report.path = DecisionPath::CaseI;
        if (vanishes(diag.q) || vanishes(diag.r)) {
            report.verdict = Verdict::Separable;
            report.det_value = 0.0;
        } else {
            Complex probe{0.0, 0.0};
            if (!vanishes(diag.s)) {
                report.probe_outcome = 14;
                report.probe_hamiltonian = HamiltonianKind::General;
                // No signal at 14 means sq <= den tol; |x|^2 <= qr keeps det negligible.
                probe = wv.get(14).value_or(Complex{0.0, 0.0});
            } else {
                if (!relocated_probe) {
                    throw Error("s vanishes: outcome 14 has no signal and a relocated probe is required");
                }
                report.probe_outcome = kRelocatedProbeOutcome;
                report.probe_hamiltonian = HamiltonianKind::Relocated;
                probe = *relocated_probe;
            }
            const double magnitude = std::abs(probe);  // |x*/q|
            report.verdict = nullity(magnitude);
            report.det_value = -magnitude * magnitude * diag.q * diag.q * diag.q * diag.r;
        }
    } else if (vanishes(diag.q) || vanishes(diag.r)) {
        report.path = DecisionPath::CaseII;
        report.probe_outcome = 16;
        report.probe_hamiltonian = HamiltonianKind::General;
        const double magnitude = std::abs(wv.get(16).value_or(Complex{0.0, 0.0}));  // |w/s|
        report.verdict = nullity(magnitude);
        report.det_value = -magnitude * magnitude * diag.p * diag.s * diag.s * diag.s;
    } else {
        report.path = DecisionPath::General;
        const double pqrs = diag.product();
        const double bracket = bracket_from_ratios(ratios_from_weak_values(wv, diag), diag);
        report.det_scaled = bracket;
        report.det_value = bracket * pqrs;
        report.verdict = bracket < -tol.det / pqrs ? Verdict::Entangled : Verdict::Separable;
    }
    report.e_estimate = std::max(0.0, -report.det_value.value_or(0.0));
    return report;
}

DetectionReport detect(const TwoQubitState& rho, const Tolerances& tol) {
    const WeakValueSet wv = weak_values_all(rho, tol.denominator);
    const Diagonals diag = diagonals_from_postselection(rho);
    std::optional<Complex> relocated;
    if (diag.s < tol.diag && diag.q >= tol.diag && diag.r >= tol.diag) {
        static const WeakHamiltonian h = build_block_hamiltonian(kRelocatedLayout);
        try {
            relocated = exact_weak_value(rho, h, OutcomeIndex(kRelocatedProbeOutcome), tol.denominator);
        } catch (const NoSignalError&) {
            relocated = Complex{0.0, 0.0};
        }
    }
    return decide(wv, diag, tol, relocated);
}

TwoQubitState reconstruct(const WeakValueSet& wv, const Diagonals& diag) {
    for (double d : {diag.p, diag.q, diag.r, diag.s}) {
        if (!(d >= 0.0) || !std::isfinite(d)) throw Error("diagonals must be finite and non-negative");
    }
    const double total = diag.p + diag.q + diag.r + diag.s;
    if (std::abs(total - 1.0) > 1e-6) {
        throw Error("diagonals sum to " + std::to_string(total) + ", expected 1 within 1e-6");
    }
    const Diagonals d{diag.p / total, diag.q / total, diag.r / total, diag.s / total};

    // Element = (direct ratio) * its diagonal, else conj(partner ratio * partner diagonal).
    auto recover = [&](int direct_k, double direct_den, int partner_k, double partner_den) {
        if (const auto value = wv.get(direct_k)) return *value * direct_den;
        if (const auto value = wv.get(partner_k)) return std::conj(*value * partner_den);
        return Complex{0.0, 0.0};
    };
    const Complex u = recover(2, d.q, 1, d.p);
    const Complex z = recover(4, d.s, 3, d.r);
    const Complex v = recover(11, d.r, 9, d.p);
    const Complex y = recover(12, d.s, 10, d.q);
    const Complex w = recover(16, d.s, 13, d.p);
    const Complex x = recover(15, d.r, 14, d.q);

    CMatrix m{{d.p, u, v, w},
              {std::conj(u), d.q, x, y},
              {std::conj(v), std::conj(x), d.r, z},
              {std::conj(w), std::conj(y), std::conj(z), d.s}};

    EigenDecomposition eig = hermitian_eigen(m);
    if (eig.values.front() < -1e-6) {
        throw InvalidStateError(StateErrorKind::NotPositive,
                                "reconstructed matrix has eigenvalue " +
                                    std::to_string(eig.values.front()) + " (inconsistent data)");
    }
    if (eig.values.front() < -kStateTol) {
        // Clip the small negative tail back onto the state space.
        double kept = 0.0;
        for (double& lambda : eig.values) {
            lambda = std::max(0.0, lambda);
            kept += lambda;
        }
        CMatrix clipped(4, 4);
        for (std::size_t j = 0; j < 4; ++j) {
            const auto col = eig.vectors.column(j);
            clipped += (eig.values[j] / kept) * CMatrix::outer(col);
        }
        m = clipped;
    }
    return TwoQubitState::validate(m);
}

DetectionReport detect_pure_local(const PureAmplitudes& psi, const Tolerances& tol) {
    const PureAmplitudes checked = PureAmplitudes::make(psi.a, psi.b, psi.c, psi.d);
    const TwoQubitState rho = checked.to_state();
    static const WeakHamiltonian h = build_local_hamiltonian();
    const Diagonals diag = diagonals_from_postselection(rho);

    DetectionReport report;
    report.path = DecisionPath::PureLocal;
    report.weak_values = weak_values_all(rho, h, tol.denominator);

    auto vanishes = [&](double d) { return d < tol.diag; };
    double minor = 0.0;  // |ad - bc|
    if (vanishes(diag.p) || vanishes(diag.q) || vanishes(diag.r) || vanishes(diag.s)) {
        // With a known-zero amplitude at most one of |ad|, |bc| survives, and
        // its magnitude follows from the diagonals alone.
        const double ad = (vanishes(diag.p) || vanishes(diag.s)) ? 0.0 : std::sqrt(diag.p * diag.s);
        const double bc = (vanishes(diag.q) || vanishes(diag.r)) ? 0.0 : std::sqrt(diag.q * diag.r);
        minor = std::max(ad, bc);
        report.verdict = minor > tol.weak_value ? Verdict::Entangled : Verdict::Separable;
    } else {
        // u/q = a/b and z/s = c/d; probabilities are positive on this branch.
        const Complex u_over_q = exact_weak_value(rho, h, OutcomeIndex(2), 0.0);
        const Complex z_over_s = exact_weak_value(rho, h, OutcomeIndex(4), 0.0);
        const double gap = std::abs(u_over_q - z_over_s);
        report.verdict = gap > tol.weak_value ? Verdict::Entangled : Verdict::Separable;
        minor = gap * std::sqrt(diag.q * diag.s);
    }
    // det(rho^{T_B}) = -|ad - bc|^4 for pure states.
    report.det_value = -std::pow(minor, 4);
    report.e_estimate = -*report.det_value;
    return report;
}

}  // namespace twocopy
