#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "canonform/defaults.hpp"
#include "canonform/dense_matrix.hpp"

namespace canonform {

struct ReductionOptions {
    double tol = kDefaultTolerance;
    double cluster_tol = kDefaultClusterTolerance;
};

struct StageResidual {
    std::string stage;
    double value = 0.0;
};

struct ReductionReport {
    std::vector<StageResidual> stages;
    double transform_structure_residual = 0.0;  // ||P^H B P - B||_F
    double pattern_residual = 0.0;              // worst off-pattern entry
    double similarity_residual = 0.0;           // ||A P - P C||_F

    void add(std::string stage, double value) { stages.push_back({std::move(stage), value}); }
};

/// A = S - iK with S = (A + A*)/2 and K = (i/2)(A - A*), both per-Hermitian;
/// they commute exactly when A is R-normal.
std::pair<DenseMatrix, DenseMatrix> split_self_skew(const DenseMatrix& a);

/// Nonreal eigenvalues of a per-Hermitian matrix peeled into the diagonal
/// corners: P^{-1} A P = (D (+) D*) . core with core per-Hermitian carrying
/// only (numerically) real eigenvalues. Cluster sizes of D are kept for the
/// commuting-pair version.
struct PeelResult {
    DenseMatrix P;
    DenseMatrix D;     // diagonal, eigenvalues with positive imaginary part
    DenseMatrix core;  // per-Hermitian, real spectrum
    std::vector<std::size_t> cluster_sizes;
    ReductionReport report;
};

PeelResult peel_nonreal(const DenseMatrix& a, const ReductionOptions& opts = {});

/// Simultaneous peel of a commuting pair: one perplectic P gives both
/// P^{-1} A P = (D_A (+) D_A*) . core_a and the same shape for B, with a
/// shared corner size s.
struct PairPeelResult {
    DenseMatrix P;
    DenseMatrix D_A;
    DenseMatrix D_B;
    DenseMatrix core_a;
    DenseMatrix core_b;
    ReductionReport report;
};

PairPeelResult peel_nonreal_pair(const DenseMatrix& a, const DenseMatrix& b,
                                 const ReductionOptions& opts = {});

/// Commuting diagonalizable per-Hermitian pair with real spectra rotated to
/// real bisymmetric X-form by one perplectic similarity.
struct XPairResult {
    DenseMatrix P;
    DenseMatrix X_A;
    DenseMatrix X_B;
    ReductionReport report;
};

XPairResult real_pair_to_x(const DenseMatrix& a, const DenseMatrix& b,
                           const ReductionOptions& opts = {});

/// Full reduction of a diagonalizable R-normal matrix to X-form.
struct XFormResult {
    DenseMatrix P;
    DenseMatrix X;
    std::size_t corner = 0;  // rows of each diagonal corner block
    ReductionReport residuals;
};

XFormResult normal_to_x(const DenseMatrix& a, const ReductionOptions& opts = {});

}  // namespace canonform
