#include "twocopy/pointer.hpp"

#include <fftw3.h>

#include <cmath>
#include <iomanip>
#include <map>
#include <mutex>
#include <numbers>
#include <string>

namespace twocopy {

namespace {

// In-place FFTW plans keyed by size. Planning is not thread-safe in FFTW, so
// it happens under a lock; execution on fresh buffers is.
struct PlanPair {
    fftw_plan forward;
    fftw_plan backward;
};

const PlanPair& plans_for(std::size_t n) {
    static std::mutex mutex;
    static std::map<std::size_t, PlanPair> cache;
    std::lock_guard lock(mutex);
    auto it = cache.find(n);
    if (it == cache.end()) {
        auto* scratch = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
        const int size = static_cast<int>(n);
        PlanPair pair{fftw_plan_dft_1d(size, scratch, scratch, FFTW_FORWARD, FFTW_ESTIMATE),
                      fftw_plan_dft_1d(size, scratch, scratch, FFTW_BACKWARD, FFTW_ESTIMATE)};
        fftw_free(scratch);
        it = cache.emplace(n, pair).first;
    }
    return it->second;
}

class FftBuffer {
public:
    explicit FftBuffer(const std::vector<Complex>& values)
        : n_(values.size()),
          data_(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n_))) {
        for (std::size_t i = 0; i < n_; ++i) {
            data_[i][0] = values[i].real();
            data_[i][1] = values[i].imag();
        }
    }
    ~FftBuffer() { fftw_free(data_); }
    FftBuffer(const FftBuffer&) = delete;
    FftBuffer& operator=(const FftBuffer&) = delete;

    void forward() { fftw_execute_dft(plans_for(n_).forward, data_, data_); }
    /// Unnormalised inverse; callers divide by n.
    void backward() { fftw_execute_dft(plans_for(n_).backward, data_, data_); }

    Complex operator[](std::size_t i) const { return {data_[i][0], data_[i][1]}; }
    void set(std::size_t i, Complex z) {
        data_[i][0] = z.real();
        data_[i][1] = z.imag();
    }
    std::size_t size() const { return n_; }

private:
    std::size_t n_;
    fftw_complex* data_;
};

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

}  // namespace

PointerGrid::PointerGrid(std::size_t n, double half_extent) : n_(n), half_extent_(half_extent) {
    if (n < 256 || !is_power_of_two(n)) {
        throw ConfigError("pointer grid size must be a power of two >= 256, got " + std::to_string(n));
    }
    if (!(half_extent > 0.0) || !std::isfinite(half_extent)) {
        throw ConfigError("pointer grid half extent must be positive");
    }
}

double PointerGrid::wave_number(std::size_t j) const {
    const auto n = static_cast<double>(n_);
    const double bin = j < n_ / 2 ? static_cast<double>(j) : static_cast<double>(j) - n;
    return 2.0 * std::numbers::pi * bin / (n * spacing());
}

PointerWave::PointerWave(PointerGrid grid, std::vector<Complex> amplitudes)
    : grid_(grid), amplitudes_(std::move(amplitudes)) {
    if (amplitudes_.size() != grid_.size()) {
        throw DimensionError("pointer amplitudes do not match grid size");
    }
}

double PointerWave::norm() const {
    double sum = 0.0;
    for (const Complex& a : amplitudes_) sum += std::norm(a);
    return sum * grid_.spacing();
}

PointerMoments PointerWave::moments() const {
    PointerMoments m;
    double weight = 0.0, first = 0.0, second = 0.0;
    for (std::size_t j = 0; j < amplitudes_.size(); ++j) {
        const double density = std::norm(amplitudes_[j]);
        const double x = grid_.position(j);
        weight += density;
        first += x * density;
        second += x * x * density;
    }
    m.norm = weight * grid_.spacing();
    if (weight == 0.0) return m;
    m.mean_x = first / weight;
    m.var_x = second / weight - m.mean_x * m.mean_x;

    FftBuffer spectrum(amplitudes_);
    spectrum.forward();
    double spectral_weight = 0.0, p_first = 0.0, p_second = 0.0;
    for (std::size_t j = 0; j < spectrum.size(); ++j) {
        const double density = std::norm(spectrum[j]);
        const double k = grid_.wave_number(j);
        spectral_weight += density;
        p_first += k * density;
        p_second += k * k * density;
    }
    m.mean_p = p_first / spectral_weight;
    m.var_p = p_second / spectral_weight - m.mean_p * m.mean_p;
    return m;
}

PointerWave PointerWave::translated(double shift) const {
    if (shift == 0.0) return *this;
    FftBuffer buffer(amplitudes_);
    buffer.forward();
    for (std::size_t j = 0; j < buffer.size(); ++j) {
        buffer.set(j, buffer[j] * std::polar(1.0, -shift * grid_.wave_number(j)));
    }
    buffer.backward();
    const double inv_n = 1.0 / static_cast<double>(buffer.size());
    std::vector<Complex> out(buffer.size());
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = buffer[j] * inv_n;
    return PointerWave(grid_, std::move(out));
}

void PointerWave::write_csv(std::ostream& out) const {
    out << "x,re,im\n" << std::setprecision(17);
    for (std::size_t j = 0; j < amplitudes_.size(); ++j) {
        out << grid_.position(j) << ',' << amplitudes_[j].real() << ',' << amplitudes_[j].imag()
            << '\n';
    }
}

PointerWave gaussian_pointer(double sigma, const PointerGrid& grid) {
    if (!(sigma > 0.0)) throw ConfigError("pointer width must be positive");
    if (grid.half_extent() < 10.0 * sigma) {
        throw ConfigError("pointer grid half extent " + std::to_string(grid.half_extent()) +
                          " is below 10 sigma = " + std::to_string(10.0 * sigma));
    }
    std::vector<Complex> amplitudes(grid.size());
    double sum = 0.0;
    for (std::size_t j = 0; j < grid.size(); ++j) {
        const double x = grid.position(j);
        const double value = std::exp(-x * x / (4.0 * sigma * sigma));
        amplitudes[j] = value;
        sum += value * value;
    }
    const double scale = 1.0 / std::sqrt(sum * grid.spacing());
    for (Complex& a : amplitudes) a *= scale;
    return PointerWave(grid, std::move(amplitudes));
}

void SimConfig::validate() const {
    if (!(epsilon >= 0.0) || epsilon > 0.1) {
        throw ConfigError("epsilon must lie in [0, 0.1] (weak regime), got " + std::to_string(epsilon));
    }
    if (!(sigma > 0.0)) throw ConfigError("sigma must be positive");
    const PointerGrid g = grid();
    if (g.half_extent() < 10.0 * sigma) {
        throw ConfigError("grid half extent must be at least 10 sigma");
    }
}

namespace {

struct Eigenspace {
    double eigenvalue;
    CMatrix projector;
};

std::vector<Eigenspace> eigenspaces(const CMatrix& h) {
    const EigenDecomposition eig = hermitian_eigen(h);
    std::vector<Eigenspace> spaces;
    const std::size_t n = h.rows();
    for (std::size_t j = 0; j < n; ++j) {
        if (spaces.empty() || std::abs(eig.values[j] - spaces.back().eigenvalue) > 1e-9) {
            spaces.push_back({eig.values[j], CMatrix(n, n)});
        }
        spaces.back().projector += CMatrix::outer(eig.vectors.column(j));
    }
    return spaces;
}

struct BranchState {
    double weight;
    std::vector<Complex> ket;  // 16 entries
};

std::vector<BranchState> two_copy_ensemble(const TwoQubitState& rho) {
    // Eigenvalues at round-off level are dropped so a pure state stays a
    // single branch; the discarded weight is far below every tolerance.
    constexpr double kNegligibleEigenvalue = 1e-14;
    const EigenDecomposition eig = hermitian_eigen(rho.matrix());
    std::vector<BranchState> out;
    for (std::size_t a = 0; a < 4; ++a) {
        if (eig.values[a] <= kNegligibleEigenvalue) continue;
        for (std::size_t b = 0; b < 4; ++b) {
            if (eig.values[b] <= kNegligibleEigenvalue) continue;
            const double weight = eig.values[a] * eig.values[b];
            std::vector<Complex> ket(16);
            for (std::size_t i = 0; i < 4; ++i) {
                for (std::size_t j = 0; j < 4; ++j) {
                    ket[4 * i + j] = eig.vectors(i, a) * eig.vectors(j, b);
                }
            }
            out.push_back({weight, std::move(ket)});
        }
    }
    return out;
}

struct MomentAccumulator {
    double weight = 0.0, x1 = 0.0, x2 = 0.0, p1 = 0.0, p2 = 0.0;

    void add(double w, const PointerMoments& m) {
        weight += w;
        x1 += w * m.mean_x;
        x2 += w * (m.var_x + m.mean_x * m.mean_x);
        p1 += w * m.mean_p;
        p2 += w * (m.var_p + m.mean_p * m.mean_p);
    }
    PointerMoments finish() const {
        PointerMoments m;
        m.norm = 1.0;
        m.mean_x = x1 / weight;
        m.var_x = x2 / weight - m.mean_x * m.mean_x;
        m.mean_p = p1 / weight;
        m.var_p = p2 / weight - m.mean_p * m.mean_p;
        return m;
    }
};

}  // namespace

PostSelectedPointer evolve_and_postselect(const TwoQubitState& rho, const WeakHamiltonian& h,
                                          const SimConfig& cfg, OutcomeIndex k, double den_tol) {
    cfg.validate();
    const PointerWave initial = gaussian_pointer(cfg.sigma, cfg.grid());
    const std::vector<Eigenspace> spaces = eigenspaces(h.matrix);
    std::vector<PointerWave> shifted;
    shifted.reserve(spaces.size());
    for (const Eigenspace& space : spaces) {
        shifted.push_back(initial.translated(cfg.epsilon * space.eigenvalue));
    }

    const std::size_t row = k.basis_index();
    const std::size_t n = initial.grid().size();
    PostSelectedPointer result;
    std::vector<std::pair<double, PointerWave>> raw;
    MomentAccumulator acc;
    for (const BranchState& branch : two_copy_ensemble(rho)) {
        std::vector<Complex> amplitudes(n, Complex{0.0, 0.0});
        bool any = false;
        for (std::size_t c = 0; c < spaces.size(); ++c) {
            Complex coeff{0.0, 0.0};  // <u_k| P_c |psi_m>
            for (std::size_t j = 0; j < 16; ++j) coeff += spaces[c].projector(row, j) * branch.ket[j];
            if (std::abs(coeff) < 1e-300) continue;
            any = true;
            const auto& wave = shifted[c].amplitudes();
            for (std::size_t x = 0; x < n; ++x) amplitudes[x] += coeff * wave[x];
        }
        if (!any) continue;
        PointerWave wave(initial.grid(), std::move(amplitudes));
        const double branch_prob = wave.norm();
        if (branch_prob <= 0.0) continue;
        const double weighted = branch.weight * branch_prob;
        result.probability += weighted;
        acc.add(weighted, wave.moments());
        raw.emplace_back(weighted, std::move(wave));
    }
    if (!(result.probability > den_tol)) throw NoSignalError(k.k(), result.probability);

    result.moments = acc.finish();
    for (auto& [weighted, wave] : raw) {
        const double scale = 1.0 / std::sqrt(wave.norm());
        std::vector<Complex> normalized = wave.amplitudes();
        for (Complex& a : normalized) a *= scale;
        result.branches.emplace_back(weighted / result.probability,
                                     PointerWave(wave.grid(), std::move(normalized)));
    }
    return result;
}

Complex readout_weak_value(const PointerMoments& initial, const PointerMoments& post,
                           double epsilon, double sigma) {
    if (!(epsilon > 0.0)) throw ConfigError("weak-value readout needs epsilon > 0");
    const double var_p = 1.0 / (4.0 * sigma * sigma);
    return {(post.mean_x - initial.mean_x) / epsilon,
            (post.mean_p - initial.mean_p) / (2.0 * epsilon * var_p)};
}

std::vector<WeakReadout> estimate_weak_values(const TwoQubitState& rho, const SimConfig& cfg,
                                              const WeakHamiltonian& h, double den_tol) {
    cfg.validate();
    const PointerMoments initial = gaussian_pointer(cfg.sigma, cfg.grid()).moments();
    std::vector<WeakReadout> out;
    for (int k = 1; k <= 16; ++k) {
        const OutcomeIndex outcome(k);
        if (!(postselection_probability(rho, outcome) > den_tol)) continue;
        const PostSelectedPointer post = evolve_and_postselect(rho, h, cfg, outcome, 0.0);
        out.push_back({outcome, readout_weak_value(initial, post.moments, cfg.epsilon, cfg.sigma),
                       post.probability});
    }
    return out;
}

std::vector<WeakReadout> estimate_weak_values(const TwoQubitState& rho, const SimConfig& cfg) {
    static const WeakHamiltonian h = build_hamiltonian();
    return estimate_weak_values(rho, cfg, h);
}

WeakValueSet to_weak_value_set(const std::vector<WeakReadout>& readouts) {
    WeakValueSet out;
    for (const WeakReadout& r : readouts) out.set(r.k, r.estimate);
    return out;
}

}  // namespace twocopy
