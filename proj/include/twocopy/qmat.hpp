// Dense complex matrix kernel sized for two-copy two-qubit problems (at most 16x16).

#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "twocopy/errors.hpp"

namespace twocopy {

using Complex = std::complex<double>;

/// Maximum entrywise deviation from Hermiticity accepted by the eigen-solver.
inline constexpr double kHermitianTol = 1e-10;

/// Row-major dense complex matrix. Entries are always finite.
class CMatrix {
public:
    CMatrix() = default;
    CMatrix(std::size_t rows, std::size_t cols);
    CMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);
    CMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

    static CMatrix zeros(std::size_t rows, std::size_t cols) { return CMatrix(rows, cols); }
    static CMatrix identity(std::size_t n);
    static CMatrix diagonal(std::span<const Complex> diag);
    static CMatrix diagonal(std::initializer_list<Complex> diag);
    /// |v><v| for a column vector given as a span.
    static CMatrix outer(std::span<const Complex> ket);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }
    bool empty() const { return data_.empty(); }

    Complex& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Complex& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<const Complex> data() const { return data_; }
    std::vector<Complex> column(std::size_t j) const;

    Complex trace() const;

    CMatrix& operator+=(const CMatrix& other);
    CMatrix& operator-=(const CMatrix& other);
    CMatrix& operator*=(Complex scale);

    friend bool operator==(const CMatrix&, const CMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Complex> data_;
};

CMatrix operator+(CMatrix a, const CMatrix& b);
CMatrix operator-(CMatrix a, const CMatrix& b);
CMatrix operator*(Complex scale, CMatrix a);
CMatrix operator*(const CMatrix& a, const CMatrix& b);

CMatrix matmul(const CMatrix& a, const CMatrix& b);
CMatrix kron(const CMatrix& a, const CMatrix& b);
CMatrix adjoint(const CMatrix& a);
CMatrix transpose(const CMatrix& a);

/// Determinant by LU factorisation with partial pivoting.
Complex determinant(const CMatrix& a);

/// max_ij |a_ij - b_ij|; dimensions must agree.
double max_abs_diff(const CMatrix& a, const CMatrix& b);
double frobenius_norm(const CMatrix& a);

/// max_ij |a_ij - conj(a_ji)|
double hermiticity_defect(const CMatrix& a);
bool is_hermitian(const CMatrix& a, double tol = kHermitianTol);

struct EigenDecomposition {
    std::vector<double> values;  // ascending
    CMatrix vectors;             // column j pairs with values[j]
};

/// Cyclic complex Jacobi. The input is checked against kHermitianTol and
/// symmetrised before rotation.
EigenDecomposition hermitian_eigen(const CMatrix& a);

/// Sum of singular values.
double trace_norm(const CMatrix& a);

/// exp(scale * a) for Hermitian a, computed through its eigendecomposition.
CMatrix expm_hermitian(const CMatrix& a, Complex scale);

namespace pauli {
CMatrix identity2();
CMatrix x();
CMatrix y();
CMatrix z();
}  // namespace pauli

}  // namespace twocopy
