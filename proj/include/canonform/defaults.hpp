#pragma once

namespace canonform {

/// Relative residual tolerance used by structure checks and reductions.
/// Effective absolute threshold is tol * max(1, ||A||_F).
inline constexpr double kDefaultTolerance = 1e-10;

/// Eigenvalue clustering threshold, relative to max(1, ||A||_F). Sits above
/// eigensolver noise and below the generator-enforced eigenvalue gaps.
inline constexpr double kDefaultClusterTolerance = 1e-7;

/// Two eigenvalues closer than this count as a multiple eigenvalue for
/// genericity purposes (absolute, desk-scale inputs).
inline constexpr double kDistinctGapThreshold = 1e-6;

/// Condition cap for the eigenvector matrix in diagonalizability checks.
inline constexpr double kDefaultConditionCap = 1e8;

/// Rank drop tolerance for column-pivoted QR in multiplicity checks.
inline constexpr double kRankDropTolerance = 1e-8;

/// Largest size for the resultant-based discriminant.
inline constexpr int kDiscriminantSizeCap = 12;

}  // namespace canonform
