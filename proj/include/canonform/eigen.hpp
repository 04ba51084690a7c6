#pragma once

#include <cstddef>
#include <vector>

#include "canonform/defaults.hpp"
#include "canonform/dense_matrix.hpp"

namespace canonform {

/// A = Q T Q^H with T upper triangular and Q unitary.
struct SchurDecomposition {
    DenseMatrix T;
    DenseMatrix Q;
    std::size_t iterations = 0;
};

/// Householder Hessenberg reduction followed by Wilkinson-shifted complex QR
/// with deflation. max_iterations of 0 selects 30*n; throws NonConvergenceError
/// on pathological input (retry after a random unitary similarity if needed).
SchurDecomposition schur(const DenseMatrix& a, std::size_t max_iterations = 0);

struct EigenCluster {
    Complex value;                             // arithmetic mean of members
    std::size_t multiplicity = 0;
    std::vector<std::size_t> column_indices;   // contiguous after ordering
};

struct EigenDecomposition {
    std::vector<Complex> values;
    DenseMatrix vectors;   // unit-norm columns
    std::vector<EigenCluster> clusters;
};

/// Eigenvalues from the Schur diagonal, eigenvectors by back-substitution
/// lifted through Q. Clusters use single linkage at
/// cluster_tol * max(1, ||A||_F) and are ordered by (Im desc, Re asc) with
/// members made adjacent by unitary Schur reordering.
EigenDecomposition eig(const DenseMatrix& a, double cluster_tol = kDefaultClusterTolerance);

struct DiagonalizabilityReport {
    bool diagonalizable = false;
    double condition_estimate = 0.0;
};

/// True when the eigenvector matrix condition stays below cond_cap and every
/// cluster's eigenvector block has full rank under column-pivoted QR.
DiagonalizabilityReport check_diagonalizable(const DenseMatrix& a,
                                             double cond_cap = kDefaultConditionCap);

/// One T with T^{-1} A T and T^{-1} B T both diagonal within tol. Built by
/// diagonalizing A and then diagonalizing B restricted to each eigenvalue
/// cluster of A. Throws NotCommutingError / DefectiveError.
DenseMatrix simultaneous_diagonalize(const DenseMatrix& a, const DenseMatrix& b,
                                     double tol = kDefaultTolerance,
                                     double cluster_tol = kDefaultClusterTolerance);

enum class HermitianKind { Hermitian, SkewHermitian };

struct InertiaCongruence {
    DenseMatrix Q;
    std::size_t n_plus = 0;
    std::size_t n_minus = 0;
};

/// Q^H A Q = diag(+I, -I) for nonsingular Hermitian A (positive eigenvalues
/// first); the skew case yields diag(+iI, -iI) via the Hermitian matrix -iA.
InertiaCongruence inertia_congruence(const DenseMatrix& a, HermitianKind kind,
                                     double tol = kDefaultTolerance);

/// Scaling-and-squaring matrix exponential.
DenseMatrix matrix_exp(const DenseMatrix& k);

/// Rank of the column span under column-pivoted orthogonalization with a
/// relative drop tolerance.
std::size_t column_rank(const DenseMatrix& columns, double drop_tol = kRankDropTolerance);

}  // namespace canonform
