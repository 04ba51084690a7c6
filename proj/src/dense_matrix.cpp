#include "canonform/dense_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "canonform/errors.hpp"

namespace canonform {

namespace {

void require_same_shape(const DenseMatrix& a, const DenseMatrix& b, const char* op) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw DimensionError(std::string(op) + ": shape mismatch " + std::to_string(a.rows()) + "x" +
                             std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x" +
                             std::to_string(b.cols()));
    }
}

}  // namespace

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), entries_(rows * cols, Complex(0.0, 0.0)) {}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
    if (entries_.size() != rows_ * cols_) {
        throw DimensionError("DenseMatrix: entry count does not match rows*cols");
    }
}

DenseMatrix::DenseMatrix(std::initializer_list<std::initializer_list<Complex>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    entries_.reserve(rows_ * cols_);
    for (const auto& row : rows) {
        if (row.size() != cols_) {
            throw DimensionError("DenseMatrix: ragged initializer");
        }
        entries_.insert(entries_.end(), row.begin(), row.end());
    }
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

DenseMatrix DenseMatrix::diagonal(std::span<const Complex> values) {
    DenseMatrix m(values.size(), values.size());
    for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
    return m;
}

DenseMatrix DenseMatrix::transpose() const {
    DenseMatrix m(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) m(j, i) = (*this)(i, j);
    return m;
}

DenseMatrix DenseMatrix::conjugate_transpose() const {
    DenseMatrix m(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) m(j, i) = std::conj((*this)(i, j));
    return m;
}

DenseMatrix DenseMatrix::conjugate() const {
    DenseMatrix m(rows_, cols_);
    for (std::size_t k = 0; k < entries_.size(); ++k) m.entries_[k] = std::conj(entries_[k]);
    return m;
}

DenseMatrix& DenseMatrix::operator+=(const DenseMatrix& other) {
    require_same_shape(*this, other, "operator+=");
    for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] += other.entries_[k];
    return *this;
}

DenseMatrix& DenseMatrix::operator-=(const DenseMatrix& other) {
    require_same_shape(*this, other, "operator-=");
    for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] -= other.entries_[k];
    return *this;
}

DenseMatrix& DenseMatrix::operator*=(Complex scalar) {
    for (auto& e : entries_) e *= scalar;
    return *this;
}

double DenseMatrix::frobenius_norm() const {
    double sum = 0.0;
    for (const auto& e : entries_) sum += std::norm(e);
    return std::sqrt(sum);
}

double DenseMatrix::max_abs() const {
    double m = 0.0;
    for (const auto& e : entries_) m = std::max(m, std::abs(e));
    return m;
}

bool DenseMatrix::all_finite() const {
    for (const auto& e : entries_) {
        if (!std::isfinite(e.real()) || !std::isfinite(e.imag())) return false;
    }
    return true;
}

Complex DenseMatrix::trace() const {
    Complex t = 0.0;
    const std::size_t n = std::min(rows_, cols_);
    for (std::size_t i = 0; i < n; ++i) t += (*this)(i, i);
    return t;
}

std::vector<Complex> DenseMatrix::diagonal_entries() const {
    const std::size_t n = std::min(rows_, cols_);
    std::vector<Complex> d(n);
    for (std::size_t i = 0; i < n; ++i) d[i] = (*this)(i, i);
    return d;
}

DenseMatrix DenseMatrix::block(std::size_t row0, std::size_t col0, std::size_t nrows, std::size_t ncols) const {
    if (row0 + nrows > rows_ || col0 + ncols > cols_) {
        throw DimensionError("block: out of range");
    }
    DenseMatrix m(nrows, ncols);
    for (std::size_t i = 0; i < nrows; ++i)
        for (std::size_t j = 0; j < ncols; ++j) m(i, j) = (*this)(row0 + i, col0 + j);
    return m;
}

void DenseMatrix::set_block(std::size_t row0, std::size_t col0, const DenseMatrix& sub) {
    if (row0 + sub.rows() > rows_ || col0 + sub.cols() > cols_) {
        throw DimensionError("set_block: out of range");
    }
    for (std::size_t i = 0; i < sub.rows(); ++i)
        for (std::size_t j = 0; j < sub.cols(); ++j) (*this)(row0 + i, col0 + j) = sub(i, j);
}

DenseMatrix DenseMatrix::selected_columns(std::span<const std::size_t> indices) const {
    DenseMatrix m(rows_, indices.size());
    for (std::size_t j = 0; j < indices.size(); ++j) {
        if (indices[j] >= cols_) throw DimensionError("selected_columns: index out of range");
        for (std::size_t i = 0; i < rows_; ++i) m(i, j) = (*this)(i, indices[j]);
    }
    return m;
}

void DenseMatrix::swap_rows(std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t k = 0; k < cols_; ++k) std::swap((*this)(i, k), (*this)(j, k));
}

void DenseMatrix::swap_cols(std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t k = 0; k < rows_; ++k) std::swap((*this)(k, i), (*this)(k, j));
}

DenseMatrix operator+(DenseMatrix lhs, const DenseMatrix& rhs) {
    lhs += rhs;
    return lhs;
}

DenseMatrix operator-(DenseMatrix lhs, const DenseMatrix& rhs) {
    lhs -= rhs;
    return lhs;
}

DenseMatrix operator-(DenseMatrix m) {
    m *= Complex(-1.0, 0.0);
    return m;
}

DenseMatrix operator*(const DenseMatrix& lhs, const DenseMatrix& rhs) {
    if (lhs.cols() != rhs.rows()) {
        throw DimensionError("operator*: inner dimensions differ");
    }
    DenseMatrix out(lhs.rows(), rhs.cols());
    for (std::size_t i = 0; i < lhs.rows(); ++i) {
        for (std::size_t k = 0; k < lhs.cols(); ++k) {
            const Complex a = lhs(i, k);
            if (a == Complex(0.0, 0.0)) continue;
            for (std::size_t j = 0; j < rhs.cols(); ++j) {
                out(i, j) += a * rhs(k, j);
            }
        }
    }
    return out;
}

DenseMatrix operator*(Complex scalar, DenseMatrix m) {
    m *= scalar;
    return m;
}

DenseMatrix operator*(DenseMatrix m, Complex scalar) {
    m *= scalar;
    return m;
}

DenseMatrix direct_sum(const DenseMatrix& a, const DenseMatrix& b) {
    DenseMatrix out(a.rows() + b.rows(), a.cols() + b.cols());
    out.set_block(0, 0, a);
    out.set_block(a.rows(), a.cols(), b);
    return out;
}

LuFactorization lu_factor(DenseMatrix a) {
    if (!a.is_square()) throw DimensionError("lu_factor: matrix must be square");
    const std::size_t n = a.rows();
    LuFactorization f;
    f.pivots.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t pivot = k;
        double best = std::abs(a(k, k));
        for (std::size_t i = k + 1; i < n; ++i) {
            const double v = std::abs(a(i, k));
            if (v > best) {
                best = v;
                pivot = i;
            }
        }
        f.pivots[k] = pivot;
        if (pivot != k) {
            a.swap_rows(pivot, k);
            f.permutation_sign = -f.permutation_sign;
        }
        if (best == 0.0) {
            f.singular = true;
            continue;
        }
        const Complex inv_pivot = Complex(1.0, 0.0) / a(k, k);
        for (std::size_t i = k + 1; i < n; ++i) {
            a(i, k) *= inv_pivot;
            const Complex factor = a(i, k);
            if (factor == Complex(0.0, 0.0)) continue;
            for (std::size_t j = k + 1; j < n; ++j) {
                a(i, j) -= factor * a(k, j);
            }
        }
    }
    f.lu = std::move(a);
    return f;
}

DenseMatrix lu_solve(const LuFactorization& f, const DenseMatrix& rhs) {
    if (f.singular) throw SingularError("lu_solve: matrix is singular");
    const std::size_t n = f.lu.rows();
    if (rhs.rows() != n) throw DimensionError("lu_solve: rhs row count mismatch");
    DenseMatrix x = rhs;
    // The factorization swaps whole rows, so all interchanges apply to the
    // right-hand side before the triangular solves.
    for (std::size_t k = 0; k < n; ++k) {
        if (f.pivots[k] != k) x.swap_rows(f.pivots[k], k);
    }
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t i = k + 1; i < n; ++i) {
            const Complex factor = f.lu(i, k);
            if (factor == Complex(0.0, 0.0)) continue;
            for (std::size_t j = 0; j < x.cols(); ++j) x(i, j) -= factor * x(k, j);
        }
    }
    for (std::size_t kk = n; kk-- > 0;) {
        const Complex inv_diag = Complex(1.0, 0.0) / f.lu(kk, kk);
        for (std::size_t j = 0; j < x.cols(); ++j) {
            Complex s = x(kk, j);
            for (std::size_t i = kk + 1; i < n; ++i) s -= f.lu(kk, i) * x(i, j);
            x(kk, j) = s * inv_diag;
        }
    }
    return x;
}

DenseMatrix solve(const DenseMatrix& a, const DenseMatrix& b) {
    return lu_solve(lu_factor(a), b);
}

DenseMatrix inverse(const DenseMatrix& a) {
    return solve(a, DenseMatrix::identity(a.rows()));
}

Complex determinant(const DenseMatrix& a) {
    const LuFactorization f = lu_factor(a);
    if (f.singular) return Complex(0.0, 0.0);
    Complex det(static_cast<double>(f.permutation_sign), 0.0);
    for (std::size_t i = 0; i < f.lu.rows(); ++i) det *= f.lu(i, i);
    return det;
}

double condition_estimate(const DenseMatrix& a) {
    const LuFactorization f = lu_factor(a);
    if (f.singular) return std::numeric_limits<double>::infinity();
    const DenseMatrix inv = lu_solve(f, DenseMatrix::identity(a.rows()));
    return a.frobenius_norm() * inv.frobenius_norm();
}

double spectral_norm_estimate(const DenseMatrix& a, int iterations) {
    if (a.is_empty()) return 0.0;
    // Power iteration on A^H A with a fixed deterministic start vector.
    DenseMatrix v(a.cols(), 1);
    for (std::size_t i = 0; i < a.cols(); ++i) {
        v(i, 0) = Complex(1.0 + 0.5 * std::cos(static_cast<double>(i) + 1.0),
                          0.25 * std::sin(2.0 * static_cast<double>(i) + 1.0));
    }
    {
        const double norm = v.frobenius_norm();
        v *= Complex(1.0 / norm, 0.0);
    }
    const DenseMatrix ah = a.conjugate_transpose();
    for (int it = 0; it < iterations; ++it) {
        DenseMatrix w = ah * (a * v);
        const double norm = w.frobenius_norm();
        if (norm == 0.0) return 0.0;
        w *= Complex(1.0 / norm, 0.0);
        v = std::move(w);
    }
    return (a * v).frobenius_norm();
}

}  // namespace canonform
