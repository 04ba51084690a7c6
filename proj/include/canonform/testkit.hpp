#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "canonform/defaults.hpp"
#include "canonform/dense_matrix.hpp"
#include "canonform/scalar_product.hpp"

namespace canonform::testkit {

/// Counter-based 64-bit generator (splitmix64 update). Platform-independent
/// streams: identical seeds give identical draws everywhere.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64();

    /// Uniform in [0, 1) with 53 mantissa bits.
    double next_double();

    /// Uniform in [lo, hi).
    double next_uniform(double lo, double hi);

    /// Standard normal via Box-Muller on the raw stream.
    double next_normal();

    Complex next_complex_normal();

    /// Independent child stream.
    SplitMix64 split();

private:
    std::uint64_t state_;
};

enum class MatrixClass {
    PerHermitian,
    PerskewHermitian,
    Perplectic,
    RNormal,
    SkewHamiltonian,
    Hamiltonian,
    Symplectic,
    JNormal,
};

struct GeneratorSpec {
    MatrixClass class_kind = MatrixClass::PerHermitian;
    std::size_t dim = 0;
    std::uint64_t seed = 0;
    std::optional<std::vector<Complex>> spectrum;
    double min_gap = 1e-3;
};

/// Deterministic structured random matrix: exact class structure by
/// construction, diagonalizable, eigenvalue clusters separated by min_gap
/// unless a prescribed spectrum forces multiplicity.
DenseMatrix random_structured(const GeneratorSpec& spec);

enum class PatternKind { XForm, FourDiagonal, Diagonal, Bisymmetric };

struct PatternReport {
    bool ok = false;
    double max_off_pattern = 0.0;
};

/// Largest entry outside the pattern mask; Bisymmetric instead reports the
/// worst of the symmetry, persymmetry and realness residuals.
PatternReport check_pattern(const DenseMatrix& a, PatternKind pattern, double tol);

struct VerificationReport {
    double structure_residual = 0.0;
    double similarity_residual = 0.0;
    double pattern_residual = 0.0;
    bool structure_ok = false;
    bool similarity_ok = false;
    bool pattern_ok = false;
    bool class_preserved = false;
    bool pass = false;
    double threshold = 0.0;
};

/// End-to-end check of a reduction A ~ C under transform T, recomputed from
/// scratch: transform structure, similarity via an independent elimination
/// solve, canonical pattern, and class preservation.
VerificationReport oracle_verify_reduction(const DenseMatrix& a, const DenseMatrix& t,
                                           const DenseMatrix& c, const ScalarProduct& product,
                                           PatternKind pattern, double tol = 1e-8);

}  // namespace canonform::testkit
