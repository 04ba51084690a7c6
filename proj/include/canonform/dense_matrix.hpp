#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace canonform {

using Complex = std::complex<double>;

/// Dense complex matrix with value semantics, row-major storage.
class DenseMatrix {
public:
    DenseMatrix() = default;

    /// Zero-filled rows x cols matrix.
    DenseMatrix(std::size_t rows, std::size_t cols);

    DenseMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);

    /// Brace construction from rows: DenseMatrix{{1, 2}, {3, 4}}.
    DenseMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

    static DenseMatrix identity(std::size_t n);
    static DenseMatrix diagonal(std::span<const Complex> values);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }
    bool is_empty() const { return rows_ == 0 || cols_ == 0; }

    Complex& operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
    const Complex& operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }

    std::span<const Complex> entries() const { return entries_; }

    DenseMatrix transpose() const;
    DenseMatrix conjugate_transpose() const;
    DenseMatrix conjugate() const;

    DenseMatrix& operator+=(const DenseMatrix& other);
    DenseMatrix& operator-=(const DenseMatrix& other);
    DenseMatrix& operator*=(Complex scalar);

    double frobenius_norm() const;
    double max_abs() const;
    bool all_finite() const;
    Complex trace() const;

    std::vector<Complex> diagonal_entries() const;

    DenseMatrix block(std::size_t row0, std::size_t col0, std::size_t nrows, std::size_t ncols) const;
    void set_block(std::size_t row0, std::size_t col0, const DenseMatrix& sub);

    /// New matrix keeping the given columns, in the given order.
    DenseMatrix selected_columns(std::span<const std::size_t> indices) const;

    void swap_rows(std::size_t i, std::size_t j);
    void swap_cols(std::size_t i, std::size_t j);

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Complex> entries_;
};

DenseMatrix operator+(DenseMatrix lhs, const DenseMatrix& rhs);
DenseMatrix operator-(DenseMatrix lhs, const DenseMatrix& rhs);
DenseMatrix operator-(DenseMatrix m);
DenseMatrix operator*(const DenseMatrix& lhs, const DenseMatrix& rhs);
DenseMatrix operator*(Complex scalar, DenseMatrix m);
DenseMatrix operator*(DenseMatrix m, Complex scalar);

/// diag(A, B) as one matrix.
DenseMatrix direct_sum(const DenseMatrix& a, const DenseMatrix& b);

/// LU factorization with partial pivoting, kept for repeated solves.
struct LuFactorization {
    DenseMatrix lu;
    std::vector<std::size_t> pivots;
    int permutation_sign = 1;
    bool singular = false;
};

LuFactorization lu_factor(DenseMatrix a);
DenseMatrix lu_solve(const LuFactorization& f, const DenseMatrix& rhs);

/// Solves A X = B. Throws SingularError when a pivot vanishes.
DenseMatrix solve(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix inverse(const DenseMatrix& a);
Complex determinant(const DenseMatrix& a);

/// ||A||_F * ||A^{-1}||_F; +inf when A is numerically singular.
double condition_estimate(const DenseMatrix& a);

/// Largest singular value estimate by power iteration on A^H A.
double spectral_norm_estimate(const DenseMatrix& a, int iterations = 50);

}  // namespace canonform
