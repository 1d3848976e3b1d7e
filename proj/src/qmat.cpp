#include "twocopy/qmat.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>

namespace twocopy {

namespace {

void require_finite(std::span<const Complex> entries) {
    for (const Complex& z : entries) {
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
            throw NonFiniteError("matrix entry is not finite");
        }
    }
}

void require_same_shape(const CMatrix& a, const CMatrix& b, const char* op) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw DimensionError(std::string(op) + ": shape mismatch " + std::to_string(a.rows()) +
                             "x" + std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) +
                             "x" + std::to_string(b.cols()));
    }
}

void require_square(const CMatrix& a, const char* op) {
    if (!a.is_square()) {
        throw DimensionError(std::string(op) + ": matrix is not square");
    }
}

double off_diagonal_norm(const CMatrix& a) {
    double sum = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            if (i != j) sum += std::norm(a(i, j));
        }
    }
    return std::sqrt(sum);
}

}  // namespace

const char* to_string(StateErrorKind kind) {
    switch (kind) {
        case StateErrorKind::WrongShape: return "wrong_shape";
        case StateErrorKind::NotHermitian: return "not_hermitian";
        case StateErrorKind::TraceNotOne: return "trace_not_one";
        case StateErrorKind::NotPositive: return "not_positive";
        case StateErrorKind::NotNormalized: return "not_normalized";
    }
    return "unknown";
}

CMatrix::CMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, Complex{0.0, 0.0}) {
    if (rows == 0 || cols == 0) throw DimensionError("matrix dimensions must be positive");
}

CMatrix::CMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (rows == 0 || cols == 0) throw DimensionError("matrix dimensions must be positive");
    if (data_.size() != rows * cols) {
        throw DimensionError("entry count " + std::to_string(data_.size()) + " does not match " +
                             std::to_string(rows) + "x" + std::to_string(cols));
    }
    require_finite(data_);
}

CMatrix::CMatrix(std::initializer_list<std::initializer_list<Complex>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    if (rows_ == 0 || cols_ == 0) throw DimensionError("matrix dimensions must be positive");
    data_.reserve(rows_ * cols_);
    for (const auto& row : rows) {
        if (row.size() != cols_) throw DimensionError("ragged matrix literal");
        data_.insert(data_.end(), row.begin(), row.end());
    }
    require_finite(data_);
}

CMatrix CMatrix::identity(std::size_t n) {
    CMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

CMatrix CMatrix::diagonal(std::span<const Complex> diag) {
    CMatrix m(diag.size(), diag.size());
    for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
    require_finite(m.data());
    return m;
}

CMatrix CMatrix::diagonal(std::initializer_list<Complex> diag) {
    return diagonal(std::span<const Complex>(diag.begin(), diag.size()));
}

CMatrix CMatrix::outer(std::span<const Complex> ket) {
    CMatrix m(ket.size(), ket.size());
    for (std::size_t i = 0; i < ket.size(); ++i) {
        for (std::size_t j = 0; j < ket.size(); ++j) m(i, j) = ket[i] * std::conj(ket[j]);
    }
    require_finite(m.data());
    return m;
}

std::vector<Complex> CMatrix::column(std::size_t j) const {
    std::vector<Complex> out(rows_);
    for (std::size_t i = 0; i < rows_; ++i) out[i] = (*this)(i, j);
    return out;
}

Complex CMatrix::trace() const {
    require_square(*this, "trace");
    Complex t{0.0, 0.0};
    for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
    return t;
}

CMatrix& CMatrix::operator+=(const CMatrix& other) {
    require_same_shape(*this, other, "add");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
    return *this;
}

CMatrix& CMatrix::operator-=(const CMatrix& other) {
    require_same_shape(*this, other, "subtract");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
    return *this;
}

CMatrix& CMatrix::operator*=(Complex scale) {
    for (Complex& z : data_) z *= scale;
    require_finite(data_);
    return *this;
}

CMatrix operator+(CMatrix a, const CMatrix& b) { return a += b; }
CMatrix operator-(CMatrix a, const CMatrix& b) { return a -= b; }
CMatrix operator*(Complex scale, CMatrix a) { return a *= scale; }
CMatrix operator*(const CMatrix& a, const CMatrix& b) { return matmul(a, b); }

CMatrix matmul(const CMatrix& a, const CMatrix& b) {
    if (a.cols() != b.rows()) {
        throw DimensionError("matmul: inner dimensions differ (" + std::to_string(a.cols()) +
                             " vs " + std::to_string(b.rows()) + ")");
    }
    CMatrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const Complex aik = a(i, k);
            if (aik == Complex{}) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
        }
    }
    return out;
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
    CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const Complex aij = a(i, j);
            for (std::size_t k = 0; k < b.rows(); ++k) {
                for (std::size_t l = 0; l < b.cols(); ++l) {
                    out(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
                }
            }
        }
    }
    return out;
}

CMatrix adjoint(const CMatrix& a) {
    CMatrix out(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = std::conj(a(i, j));
    }
    return out;
}

CMatrix transpose(const CMatrix& a) {
    CMatrix out(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = a(i, j);
    }
    return out;
}

Complex determinant(const CMatrix& a) {
    require_square(a, "determinant");
    const std::size_t n = a.rows();
    CMatrix lu = a;
    Complex det{1.0, 0.0};
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        double best = std::abs(lu(col, col));
        for (std::size_t r = col + 1; r < n; ++r) {
            const double mag = std::abs(lu(r, col));
            if (mag > best) {
                best = mag;
                pivot = r;
            }
        }
        if (best == 0.0) return Complex{0.0, 0.0};
        if (pivot != col) {
            for (std::size_t j = 0; j < n; ++j) std::swap(lu(pivot, j), lu(col, j));
            det = -det;
        }
        const Complex diag = lu(col, col);
        det *= diag;
        for (std::size_t r = col + 1; r < n; ++r) {
            const Complex factor = lu(r, col) / diag;
            if (factor == Complex{}) continue;
            for (std::size_t j = col + 1; j < n; ++j) lu(r, j) -= factor * lu(col, j);
        }
    }
    return det;
}

double max_abs_diff(const CMatrix& a, const CMatrix& b) {
    require_same_shape(a, b, "max_abs_diff");
    double worst = 0.0;
    for (std::size_t i = 0; i < a.data().size(); ++i) {
        worst = std::max(worst, std::abs(a.data()[i] - b.data()[i]));
    }
    return worst;
}

double frobenius_norm(const CMatrix& a) {
    double sum = 0.0;
    for (const Complex& z : a.data()) sum += std::norm(z);
    return std::sqrt(sum);
}

double hermiticity_defect(const CMatrix& a) {
    require_square(a, "hermiticity_defect");
    double worst = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = i; j < a.cols(); ++j) {
            worst = std::max(worst, std::abs(a(i, j) - std::conj(a(j, i))));
        }
    }
    return worst;
}

bool is_hermitian(const CMatrix& a, double tol) {
    return a.is_square() && hermiticity_defect(a) <= tol;
}

EigenDecomposition hermitian_eigen(const CMatrix& input) {
    require_square(input, "hermitian_eigen");
    const double defect = hermiticity_defect(input);
    if (defect > kHermitianTol) {
        throw NotHermitianError("hermitian_eigen: Hermiticity defect " + std::to_string(defect));
    }
    const std::size_t n = input.rows();
    CMatrix a = 0.5 * (input + adjoint(input));
    CMatrix v = CMatrix::identity(n);

    const double threshold = 1e-14 * std::max(1.0, frobenius_norm(a));
    constexpr int kMaxSweeps = 100;
    for (int sweep = 0; sweep < kMaxSweeps && off_diagonal_norm(a) > threshold; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double mag = std::abs(a(p, q));
                if (mag < 1e-300) continue;
                const Complex phase = a(p, q) / mag;  // e^{i phi}
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double theta = (aqq - app) / (2.0 * mag);
                double t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                if (theta < 0.0) t = -t;
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                // Rotation J = diag(1, e^{-i phi}) * [[c, s], [-s, c]] on the (p, q) plane.
                const Complex jpp = c;
                const Complex jpq = s;
                const Complex jqp = -s * std::conj(phase);
                const Complex jqq = c * std::conj(phase);

                for (std::size_t r = 0; r < n; ++r) {
                    const Complex arp = a(r, p);
                    const Complex arq = a(r, q);
                    a(r, p) = arp * jpp + arq * jqp;
                    a(r, q) = arp * jpq + arq * jqq;
                }
                for (std::size_t r = 0; r < n; ++r) {
                    const Complex apr = a(p, r);
                    const Complex aqr = a(q, r);
                    a(p, r) = std::conj(jpp) * apr + std::conj(jqp) * aqr;
                    a(q, r) = std::conj(jpq) * apr + std::conj(jqq) * aqr;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                a(p, p) = a(p, p).real();
                a(q, q) = a(q, q).real();
                for (std::size_t r = 0; r < n; ++r) {
                    const Complex vrp = v(r, p);
                    const Complex vrq = v(r, q);
                    v(r, p) = vrp * jpp + vrq * jqp;
                    v(r, q) = vrp * jpq + vrq * jqq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        return a(i, i).real() < a(j, j).real();
    });
    EigenDecomposition out{std::vector<double>(n), CMatrix(n, n)};
    for (std::size_t k = 0; k < n; ++k) {
        out.values[k] = a(order[k], order[k]).real();
        for (std::size_t r = 0; r < n; ++r) out.vectors(r, k) = v(r, order[k]);
    }
    return out;
}

double trace_norm(const CMatrix& a) {
    require_square(a, "trace_norm");
    double sum = 0.0;
    if (is_hermitian(a)) {
        for (double lambda : hermitian_eigen(a).values) sum += std::abs(lambda);
        return sum;
    }
    for (double lambda : hermitian_eigen(adjoint(a) * a).values) {
        sum += std::sqrt(std::max(0.0, lambda));
    }
    return sum;
}

CMatrix expm_hermitian(const CMatrix& a, Complex scale) {
    const EigenDecomposition eig = hermitian_eigen(a);
    const std::size_t n = a.rows();
    CMatrix scaled = eig.vectors;
    for (std::size_t j = 0; j < n; ++j) {
        const Complex f = std::exp(scale * eig.values[j]);
        for (std::size_t r = 0; r < n; ++r) scaled(r, j) *= f;
    }
    return scaled * adjoint(eig.vectors);
}

namespace pauli {
CMatrix identity2() { return CMatrix::identity(2); }
CMatrix x() { return CMatrix{{0.0, 1.0}, {1.0, 0.0}}; }
CMatrix y() { return CMatrix{{0.0, Complex{0.0, -1.0}}, {Complex{0.0, 1.0}, 0.0}}; }
CMatrix z() { return CMatrix{{1.0, 0.0}, {0.0, -1.0}}; }
}  // namespace pauli

}  // namespace twocopy
