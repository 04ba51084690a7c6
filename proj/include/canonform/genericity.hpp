#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "canonform/defaults.hpp"
#include "canonform/dense_matrix.hpp"
#include "canonform/perplectic.hpp"
#include "canonform/scalar_product.hpp"

namespace canonform {

/// B-normal matrix with pairwise distinct eigenvalues commuting with both A
/// and A*. Built from the X-form of A blockwise: scale blocks that already
/// have distinct eigenvalues, replace scalar-multiple-of-identity blocks by
/// free diagonals. Coefficients are searched deterministically unless given.
DenseMatrix commuting_distinct_witness(const DenseMatrix& a, const ScalarProduct& product,
                                       std::optional<std::vector<Complex>> alphas = std::nullopt,
                                       const ReductionOptions& opts = {});

/// Discriminant of the characteristic polynomial (Faddeev-LeVerrier
/// coefficients, Sylvester resultant of p and p'). Zero within threshold
/// exactly when A has a multiple eigenvalue. Capped in size; beyond the cap
/// use eigenvalue gaps instead.
Complex discriminant(const DenseMatrix& a, int size_cap = kDiscriminantSizeCap);

struct PerturbationCertificate {
    DenseMatrix perturbed;
    double distance_frobenius = 0.0;
    double distance_spectral_estimate = 0.0;
    double min_gap = 0.0;
    Complex coefficient{0.0, 0.0};
    double normality_residual = 0.0;
};

/// B-normal perturbation of A within epsilon that has pairwise distinct
/// eigenvalues, via a seeded coefficient on the commuting witness. The
/// symplectic case routes through the perplectic frame (unitary, so the
/// distance is unchanged).
PerturbationCertificate perturb_to_distinct(const DenseMatrix& a, const ScalarProduct& product,
                                            double epsilon, std::uint64_t seed,
                                            const ReductionOptions& opts = {});

}  // namespace canonform
