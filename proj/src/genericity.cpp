#include "canonform/genericity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "canonform/eigen.hpp"
#include "canonform/errors.hpp"
#include "canonform/special_matrices.hpp"
#include "canonform/symplectic.hpp"
#include "canonform/testkit.hpp"

namespace canonform {

namespace {

double min_pairwise_gap(const std::vector<Complex>& values) {
    double gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < values.size(); ++i) {
        for (std::size_t j = i + 1; j < values.size(); ++j) {
            gap = std::min(gap, std::abs(values[i] - values[j]));
        }
    }
    return gap;
}

// Eigenvalues of a 2x2 block.
std::pair<Complex, Complex> block_eigenvalues(const DenseMatrix& n2) {
    const Complex mid = 0.5 * (n2(0, 0) + n2(1, 1));
    const Complex delta = std::sqrt(0.25 * (n2(0, 0) - n2(1, 1)) * (n2(0, 0) - n2(1, 1)) +
                                    n2(0, 1) * n2(1, 0));
    return {mid + delta, mid - delta};
}

struct WitnessBlocks {
    std::vector<DenseMatrix> blocks;       // 2x2 pieces, outermost first
    std::optional<Complex> center;         // scalar center for odd sizes
    std::vector<bool> scaled;              // rule: true = alpha * N_k
};

WitnessBlocks split_x_form(const DenseMatrix& x, double gap_threshold) {
    const std::size_t n = x.rows();
    WitnessBlocks out;
    for (std::size_t k = 0; 2 * k + 1 < n; ++k) {
        DenseMatrix block(2, 2);
        block(0, 0) = x(k, k);
        block(0, 1) = x(k, n - 1 - k);
        block(1, 0) = x(n - 1 - k, k);
        block(1, 1) = x(n - 1 - k, n - 1 - k);
        const auto [l1, l2] = block_eigenvalues(block);
        out.blocks.push_back(block);
        out.scaled.push_back(std::abs(l1 - l2) > gap_threshold);
    }
    if (n % 2 == 1) out.center = x(n / 2, n / 2);
    return out;
}

DenseMatrix assemble_witness(const WitnessBlocks& split, const std::vector<Complex>& alphas,
                             std::vector<Complex>& eigenvalues) {
    eigenvalues.clear();
    std::vector<DenseMatrix> parts;
    for (std::size_t k = 0; k < split.blocks.size(); ++k) {
        const Complex alpha = alphas[k];
        if (split.scaled[k]) {
            parts.push_back(alpha * split.blocks[k]);
            const auto [l1, l2] = block_eigenvalues(split.blocks[k]);
            eigenvalues.push_back(alpha * l1);
            eigenvalues.push_back(alpha * l2);
        } else {
            const Complex diag[] = {alpha, Complex(1.0, 0.0) + alpha};
            parts.push_back(DenseMatrix::diagonal(diag));
            eigenvalues.push_back(alpha);
            eigenvalues.push_back(Complex(1.0, 0.0) + alpha);
        }
    }
    if (split.center) {
        const Complex alpha = alphas[split.blocks.size()];
        const Complex diag[] = {alpha};
        parts.push_back(DenseMatrix::diagonal(diag));
        eigenvalues.push_back(alpha);
    }
    if (parts.size() == 1) return parts[0];
    return perplectic_sum(parts);
}

// Coefficients normalizing each scaled block to a magnitude ladder 1, 2, ...
// Duplicated eigenvalues of the input land in different blocks and separate
// by the ladder spacing regardless of how small they are.
std::vector<Complex> ladder_coefficients(const WitnessBlocks& split, double phase_step) {
    const std::size_t count = split.blocks.size() + (split.center ? 1 : 0);
    std::vector<Complex> alphas(count);
    for (std::size_t k = 0; k < split.blocks.size(); ++k) {
        const double target = 1.0 + static_cast<double>(k);
        if (split.scaled[k]) {
            const auto [l1, l2] = block_eigenvalues(split.blocks[k]);
            const double mean = 0.5 * (std::abs(l1) + std::abs(l2));
            const double angle = phase_step * static_cast<double>(k + 1);
            alphas[k] = std::polar(target / std::max(mean, 1e-8), angle);
        } else {
            // Free diagonal: eigenvalues {alpha, 1 + alpha} around the ladder.
            alphas[k] = Complex(target, 0.25 * target);
        }
    }
    if (split.center) {
        alphas[count - 1] = Complex(0.5, -0.4);
    }
    return alphas;
}

DenseMatrix witness_perplectic(const DenseMatrix& a, std::optional<std::vector<Complex>> alphas,
                               const ReductionOptions& opts) {
    const std::size_t n = a.rows();
    const double gap_threshold = kDistinctGapThreshold;

    const XFormResult reduced = normal_to_x(a, opts);
    const WitnessBlocks split = split_x_form(reduced.X, gap_threshold * std::max(1.0, a.frobenius_norm()));
    const std::size_t count = split.blocks.size() + (split.center ? 1 : 0);

    std::vector<Complex> eigenvalues;
    DenseMatrix witness_x;
    if (alphas) {
        if (alphas->size() != count) {
            throw AlphaSearchError("commuting_distinct_witness: expected one coefficient per block");
        }
        witness_x = assemble_witness(split, *alphas, eigenvalues);
        if (min_pairwise_gap(eigenvalues) < gap_threshold) {
            throw AlphaSearchError("commuting_distinct_witness: supplied coefficients leave equal eigenvalues");
        }
    } else {
        // Deterministic ladder first, then seeded phase jitter if needed.
        bool found = false;
        testkit::SplitMix64 rng(0x7157A11C0DE5EEDull ^ (static_cast<std::uint64_t>(n) << 32));
        for (int attempt = 0; attempt < 32 && !found; ++attempt) {
            const double phase = attempt == 0 ? 0.7 : rng.next_uniform(0.2, 3.0);
            const std::vector<Complex> draw = ladder_coefficients(split, phase);
            witness_x = assemble_witness(split, draw, eigenvalues);
            found = min_pairwise_gap(eigenvalues) >= gap_threshold;
        }
        if (!found) {
            throw AlphaSearchError("commuting_distinct_witness: coefficient search failed");
        }
    }
    return reduced.P * witness_x * inverse(reduced.P);
}

}  // namespace

DenseMatrix commuting_distinct_witness(const DenseMatrix& a, const ScalarProduct& product,
                                       std::optional<std::vector<Complex>> alphas,
                                       const ReductionOptions& opts) {
    if (!a.is_square() || a.rows() != product.dim()) {
        throw DimensionError("commuting_distinct_witness: matrix size does not match scalar product");
    }
    if (product.kind() == ProductKind::Perplectic) {
        return witness_perplectic(a, std::move(alphas), opts);
    }
    const DenseMatrix a_perp = to_perplectic_frame(a, FrameDirection::Forward);
    const DenseMatrix m_perp = witness_perplectic(a_perp, std::move(alphas), opts);
    return to_perplectic_frame(m_perp, FrameDirection::Backward);
}

Complex discriminant(const DenseMatrix& a, int size_cap) {
    if (!a.is_square()) throw DimensionError("discriminant: matrix must be square");
    const int n = static_cast<int>(a.rows());
    if (n > size_cap) {
        throw SizeCapError("discriminant: size exceeds the resultant cap; use eigenvalue gaps instead");
    }
    if (n == 0) return Complex(1.0, 0.0);
    if (n == 1) return Complex(1.0, 0.0);

    // Monic characteristic polynomial p(x) = x^n + c[n-1] x^{n-1} + ... + c[0]
    // by the Faddeev-LeVerrier recurrence.
    std::vector<Complex> coeff(n + 1, Complex(0.0, 0.0));
    coeff[n] = 1.0;
    DenseMatrix m = DenseMatrix::identity(a.rows());
    for (int k = 1; k <= n; ++k) {
        m = a * m;
        const Complex ck = -m.trace() / static_cast<double>(k);
        coeff[n - k] = ck;
        for (std::size_t i = 0; i < a.rows(); ++i) m(i, i) += ck;
    }

    // Sylvester matrix of p (degree n) and p' (degree n-1).
    const int size = 2 * n - 1;
    DenseMatrix syl(size, size);
    for (int row = 0; row < n - 1; ++row) {
        for (int k = 0; k <= n; ++k) syl(row, row + k) = coeff[n - k];
    }
    for (int row = 0; row < n; ++row) {
        for (int k = 0; k < n; ++k) {
            syl(n - 1 + row, row + k) = static_cast<double>(n - k) * coeff[n - k];
        }
    }
    const Complex resultant = determinant(syl);
    const int exponent = (n * (n - 1)) / 2;
    return (exponent % 2 == 0) ? resultant : -resultant;
}

PerturbationCertificate perturb_to_distinct(const DenseMatrix& a, const ScalarProduct& product,
                                            double epsilon, std::uint64_t seed,
                                            const ReductionOptions& opts) {
    if (!a.is_square() || a.rows() != product.dim()) {
        throw DimensionError("perturb_to_distinct: matrix size does not match scalar product");
    }
    if (!(epsilon > 0.0)) throw Error("perturb_to_distinct: epsilon must be positive");
    if (!classify(a, product, opts.tol).normal) {
        throw NotNormalError("perturb_to_distinct: input is not B-normal within tolerance");
    }
    if (!check_diagonalizable(a).diagonalizable) {
        throw DefectiveError("perturb_to_distinct: input is numerically defective");
    }

    const double gap_threshold = kDistinctGapThreshold;
    auto certify = [&](const DenseMatrix& candidate, Complex coefficient) {
        PerturbationCertificate cert;
        cert.perturbed = candidate;
        cert.coefficient = coefficient;
        const DenseMatrix diff = candidate - a;
        cert.distance_frobenius = diff.frobenius_norm();
        cert.distance_spectral_estimate = spectral_norm_estimate(diff);
        cert.min_gap = min_pairwise_gap(eig(candidate).values);
        cert.normality_residual = classify(candidate, product, opts.tol).normal_residual.frobenius;
        return cert;
    };

    // Already distinct: the identity perturbation qualifies.
    if (min_pairwise_gap(eig(a).values) >= gap_threshold) {
        return certify(a, Complex(0.0, 0.0));
    }

    const DenseMatrix witness = commuting_distinct_witness(a, product, std::nullopt, opts);
    const double witness_norm = witness.frobenius_norm();
    const double radius = epsilon / (2.0 * std::max(witness_norm, 1e-300));

    testkit::SplitMix64 rng(seed ^ 0x9E2B7A11D15717C7ull);
    for (int attempt = 0; attempt < 32; ++attempt) {
        // Uniform draw on the disk of the sampling radius.
        double x = 0.0;
        double y = 0.0;
        do {
            x = rng.next_uniform(-1.0, 1.0);
            y = rng.next_uniform(-1.0, 1.0);
        } while (x * x + y * y > 1.0);
        const Complex c = radius * Complex(x, y);
        if (std::abs(c) == 0.0) continue;
        const DenseMatrix candidate = a + c * witness;
        if (min_pairwise_gap(eig(candidate).values) >= gap_threshold) {
            return certify(candidate, c);
        }
    }
    throw SearchExhaustedError("perturb_to_distinct: no admissible coefficient in 32 draws");
}

}  // namespace canonform
