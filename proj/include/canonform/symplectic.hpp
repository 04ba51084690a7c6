#pragma once

#include "canonform/dense_matrix.hpp"
#include "canonform/perplectic.hpp"

namespace canonform {

enum class FrameDirection { Forward, Backward };

/// Forward: U A U^H (symplectic classes land in the matching perplectic
/// class); backward: U^H A U. Round trip is the identity to rounding.
DenseMatrix to_perplectic_frame(const DenseMatrix& a, FrameDirection direction);

/// Canonical form of a diagonalizable J-normal matrix: symplectic S with
/// S^{-1} A S four-diagonal (all four m x m blocks diagonal).
struct FourDiagResult {
    DenseMatrix S;
    DenseMatrix D4;
    ReductionReport residuals;
};

FourDiagResult normal_to_four_diagonal(const DenseMatrix& a, const ReductionOptions& opts = {});

}  // namespace canonform
