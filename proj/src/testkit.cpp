#include "canonform/testkit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <utility>

#include "canonform/eigen.hpp"
#include "canonform/errors.hpp"
#include "canonform/special_matrices.hpp"

namespace canonform::testkit {

std::uint64_t SplitMix64::next_u64() {
    state_ += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

double SplitMix64::next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double SplitMix64::next_uniform(double lo, double hi) {
    return lo + (hi - lo) * next_double();
}

double SplitMix64::next_normal() {
    // Box-Muller; u clamped away from zero to keep the log finite.
    const double u = std::max(next_double(), 0x1.0p-53);
    const double v = next_double();
    return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * std::numbers::pi * v);
}

Complex SplitMix64::next_complex_normal() {
    const double re = next_normal();
    const double im = next_normal();
    return Complex(re, im);
}

SplitMix64 SplitMix64::split() {
    return SplitMix64(next_u64() ^ 0x5851F42D4C957F2Dull);
}

namespace {

bool even_side(MatrixClass kind) {
    switch (kind) {
        case MatrixClass::SkewHamiltonian:
        case MatrixClass::Hamiltonian:
        case MatrixClass::Symplectic:
        case MatrixClass::JNormal:
            return true;
        default:
            return false;
    }
}

MatrixClass perplectic_counterpart(MatrixClass kind) {
    switch (kind) {
        case MatrixClass::SkewHamiltonian:
            return MatrixClass::PerHermitian;
        case MatrixClass::Hamiltonian:
            return MatrixClass::PerskewHermitian;
        case MatrixClass::Symplectic:
            return MatrixClass::Perplectic;
        case MatrixClass::JNormal:
            return MatrixClass::RNormal;
        default:
            return kind;
    }
}

DenseMatrix random_complex(std::size_t n, SplitMix64& rng) {
    DenseMatrix g(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) g(i, j) = rng.next_complex_normal();
    return g;
}

DenseMatrix per_adjoint(const DenseMatrix& a) {
    const DenseMatrix r = exchange_matrix(a.rows());
    return r * a.conjugate_transpose() * r;
}

DenseMatrix random_per_hermitian(std::size_t n, SplitMix64& rng) {
    const DenseMatrix g = random_complex(n, rng);
    return Complex(0.5, 0.0) * (g + per_adjoint(g));
}

DenseMatrix random_perskew_hermitian(std::size_t n, SplitMix64& rng) {
    const DenseMatrix g = random_complex(n, rng);
    return Complex(0.5, 0.0) * (g - per_adjoint(g));
}

DenseMatrix random_perplectic(std::size_t n, SplitMix64& rng) {
    DenseMatrix k = random_perskew_hermitian(n, rng);
    const double norm = k.frobenius_norm();
    const double target = rng.next_uniform(0.5, 2.0);
    if (norm > 0.0) k *= Complex(target / norm, 0.0);
    return matrix_exp(k);
}

double min_cluster_gap(const DenseMatrix& a) {
    const EigenDecomposition ed = eig(a);
    if (ed.clusters.size() < 2) {
        return ed.clusters.size() == 1 && ed.clusters[0].multiplicity > 1
                   ? 0.0
                   : std::numeric_limits<double>::infinity();
    }
    double gap = std::numeric_limits<double>::infinity();
    bool multiple = false;
    for (const auto& c : ed.clusters) {
        if (c.multiplicity > 1) multiple = true;
    }
    if (multiple) return 0.0;
    for (std::size_t i = 0; i < ed.clusters.size(); ++i) {
        for (std::size_t j = i + 1; j < ed.clusters.size(); ++j) {
            gap = std::min(gap, std::abs(ed.clusters[i].value - ed.clusters[j].value));
        }
    }
    return gap;
}

// Pairing map for the spectrum constraint of each structured class.
Complex pairing_image(MatrixClass kind, Complex lambda) {
    switch (kind) {
        case MatrixClass::PerHermitian:
            return std::conj(lambda);
        case MatrixClass::PerskewHermitian:
            return -std::conj(lambda);
        case MatrixClass::Perplectic:
            return Complex(1.0, 0.0) / std::conj(lambda);
        default:
            return lambda;
    }
}

struct PairedSpectrum {
    std::vector<std::pair<Complex, Complex>> pairs;  // (lambda, image partner)
    std::vector<Complex> self_paired;                // fixed points of the pairing
};

PairedSpectrum pair_spectrum(MatrixClass kind, const std::vector<Complex>& spectrum) {
    double scale = 1.0;
    for (Complex v : spectrum) scale = std::max(scale, std::abs(v));
    const double tol = 1e-8 * scale;

    if (kind == MatrixClass::Perplectic) {
        for (Complex v : spectrum) {
            if (std::abs(v) <= tol) {
                throw SpectrumPairingError("spectrum: zero eigenvalue invalid for an invertible class");
            }
        }
    }

    PairedSpectrum out;
    std::vector<bool> used(spectrum.size(), false);
    for (std::size_t i = 0; i < spectrum.size(); ++i) {
        if (used[i]) continue;
        used[i] = true;
        const Complex image = pairing_image(kind, spectrum[i]);
        if (std::abs(image - spectrum[i]) <= tol) {
            out.self_paired.push_back(spectrum[i]);
            continue;
        }
        bool matched = false;
        for (std::size_t j = i + 1; j < spectrum.size(); ++j) {
            if (used[j]) continue;
            if (std::abs(spectrum[j] - image) <= tol) {
                used[j] = true;
                out.pairs.emplace_back(spectrum[i], spectrum[j]);
                matched = true;
                break;
            }
        }
        if (!matched) {
            throw SpectrumPairingError("spectrum: eigenvalue has no partner under the class pairing");
        }
    }
    return out;
}

DenseMatrix two_by_two(Complex a, Complex b, Complex c, Complex d) {
    DenseMatrix m(2, 2);
    m(0, 0) = a;
    m(0, 1) = b;
    m(1, 0) = c;
    m(1, 1) = d;
    return m;
}

// Structured block carrying two self-paired eigenvalues of the class.
DenseMatrix self_paired_block(MatrixClass kind, Complex v1, Complex v2) {
    switch (kind) {
        case MatrixClass::PerHermitian: {
            const double s = 0.5 * (v1.real() + v2.real());
            const double t = 0.5 * (v1.real() - v2.real());
            return two_by_two(s, t, t, s);
        }
        case MatrixClass::PerskewHermitian: {
            const double s = 0.5 * (v1.imag() + v2.imag());
            const double t = 0.5 * (v1.imag() - v2.imag());
            return two_by_two(Complex(0, s), Complex(0, t), Complex(0, t), Complex(0, s));
        }
        case MatrixClass::Perplectic: {
            const DenseMatrix z = diag_to_x_rotation(2);
            const Complex diag[] = {v1, v2};
            return z.conjugate_transpose() * DenseMatrix::diagonal(diag) * z;
        }
        default: {
            const Complex diag[] = {v1, v2};
            return DenseMatrix::diagonal(diag);
        }
    }
}

// X-form matrix of the class with the prescribed spectrum.
DenseMatrix structured_x_form(MatrixClass kind, const std::vector<Complex>& spectrum) {
    std::vector<DenseMatrix> blocks;
    std::optional<DenseMatrix> center;
    if (kind == MatrixClass::RNormal) {
        // No pairing constraint: sequential diagonal 2x2 blocks.
        std::size_t i = 0;
        for (; i + 1 < spectrum.size(); i += 2) {
            const Complex diag[] = {spectrum[i], spectrum[i + 1]};
            blocks.push_back(DenseMatrix::diagonal(diag));
        }
        if (i < spectrum.size()) {
            const Complex diag[] = {spectrum[i]};
            center = DenseMatrix::diagonal(diag);
        }
    } else {
        const PairedSpectrum paired = pair_spectrum(kind, spectrum);
        for (const auto& [a, b] : paired.pairs) {
            const Complex diag[] = {a, b};
            blocks.push_back(DenseMatrix::diagonal(diag));
        }
        std::size_t i = 0;
        for (; i + 1 < paired.self_paired.size(); i += 2) {
            blocks.push_back(self_paired_block(kind, paired.self_paired[i], paired.self_paired[i + 1]));
        }
        if (i < paired.self_paired.size()) {
            const Complex diag[] = {paired.self_paired[i]};
            center = DenseMatrix::diagonal(diag);
        }
    }
    if (blocks.empty()) {
        if (!center) throw SpectrumPairingError("spectrum: empty");
        return *center;
    }
    DenseMatrix x = perplectic_sum(blocks);
    if (center) x = perplectic_sum(x, *center);
    return x;
}

DenseMatrix perplectic_side(const GeneratorSpec& spec, MatrixClass kind, SplitMix64& rng) {
    const std::size_t n = spec.dim;
    constexpr int kMaxTries = 64;

    if (spec.spectrum) {
        if (spec.spectrum->size() != n) {
            throw SpectrumPairingError("spectrum: length must equal dim");
        }
        const DenseMatrix x = structured_x_form(kind, *spec.spectrum);
        const DenseMatrix p = random_perplectic(n, rng);
        return p * x * inverse(p);
    }

    for (int attempt = 0; attempt < kMaxTries; ++attempt) {
        DenseMatrix a;
        switch (kind) {
            case MatrixClass::PerHermitian:
                a = random_per_hermitian(n, rng);
                break;
            case MatrixClass::PerskewHermitian:
                a = random_perskew_hermitian(n, rng);
                break;
            case MatrixClass::Perplectic:
                a = random_perplectic(n, rng);
                break;
            case MatrixClass::RNormal: {
                if (spec.seed % 2 == 0) {
                    // Commuting per-Hermitian pair route: A = S - i q(S).
                    const DenseMatrix s = random_per_hermitian(n, rng);
                    double coeff[4];
                    for (double& c : coeff) c = rng.next_uniform(-1.0, 1.0);
                    DenseMatrix qs = coeff[0] * DenseMatrix::identity(n);
                    DenseMatrix power = DenseMatrix::identity(n);
                    for (int d = 1; d <= 3; ++d) {
                        power = power * s;
                        qs += coeff[d] * power;
                    }
                    a = s - Complex(0.0, 1.0) * qs;
                } else {
                    // Prescribed X-form route with a random spectrum.
                    std::vector<Complex> values(n);
                    for (auto& v : values) v = 2.0 * rng.next_complex_normal();
                    const DenseMatrix x = structured_x_form(kind, values);
                    const DenseMatrix p = random_perplectic(n, rng);
                    a = p * x * inverse(p);
                }
                break;
            }
            default:
                throw Error("random_structured: unexpected class");
        }
        if (n <= 1 || min_cluster_gap(a) >= spec.min_gap) return a;
    }
    throw SearchExhaustedError("random_structured: could not reach the requested eigenvalue gap");
}

}  // namespace

DenseMatrix random_structured(const GeneratorSpec& spec) {
    if (even_side(spec.class_kind) && spec.dim % 2 != 0) {
        throw ParityError("random_structured: this class requires an even dimension");
    }
    SplitMix64 rng(spec.seed ^ 0xC0FFEE1234ABCDEFull);

    const MatrixClass base = perplectic_counterpart(spec.class_kind);
    const DenseMatrix a = perplectic_side(spec, base, rng);
    if (!even_side(spec.class_kind)) return a;

    const DenseMatrix u = frame_unitary(spec.dim);
    return u.conjugate_transpose() * a * u;
}

PatternReport check_pattern(const DenseMatrix& a, PatternKind pattern, double tol) {
    if (!a.is_square()) throw DimensionError("check_pattern: matrix must be square");
    const std::size_t n = a.rows();
    const double threshold = tol * std::max(1.0, a.frobenius_norm());
    PatternReport report;

    if (pattern == PatternKind::Bisymmetric) {
        const DenseMatrix r = exchange_matrix(n);
        double imag = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) imag = std::max(imag, std::abs(a(i, j).imag()));
        const double sym = (a - a.transpose()).max_abs();
        const double persym = (a - r * a.transpose() * r).max_abs();
        report.max_off_pattern = std::max({imag, sym, persym});
        report.ok = report.max_off_pattern <= threshold;
        return report;
    }

    if (pattern == PatternKind::FourDiagonal && n % 2 != 0) {
        throw ParityError("check_pattern: four-diagonal pattern needs an even size");
    }
    const std::size_t m = n / 2;
    auto on_pattern = [&](std::size_t i, std::size_t j) {
        switch (pattern) {
            case PatternKind::Diagonal:
                return i == j;
            case PatternKind::XForm:
                return i == j || i + j + 1 == n;
            case PatternKind::FourDiagonal:
                return (i % m) == (j % m);
            default:
                return false;
        }
    };
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (!on_pattern(i, j)) {
                report.max_off_pattern = std::max(report.max_off_pattern, std::abs(a(i, j)));
            }
        }
    }
    report.ok = report.max_off_pattern <= threshold;
    return report;
}

namespace {

// Elimination solve kept separate from the library LU so the oracle does not
// share code with the path it checks.
DenseMatrix elimination_solve(DenseMatrix a, DenseMatrix rhs) {
    const std::size_t n = a.rows();
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t pivot = k;
        double best = std::abs(a(k, k));
        for (std::size_t i = k + 1; i < n; ++i) {
            if (std::abs(a(i, k)) > best) {
                best = std::abs(a(i, k));
                pivot = i;
            }
        }
        if (best == 0.0) throw SingularError("oracle: transform is singular");
        a.swap_rows(pivot, k);
        rhs.swap_rows(pivot, k);
        for (std::size_t i = k + 1; i < n; ++i) {
            const Complex f = a(i, k) / a(k, k);
            if (f == Complex(0.0, 0.0)) continue;
            for (std::size_t j = k; j < n; ++j) a(i, j) -= f * a(k, j);
            for (std::size_t j = 0; j < rhs.cols(); ++j) rhs(i, j) -= f * rhs(k, j);
        }
    }
    for (std::size_t kk = n; kk-- > 0;) {
        for (std::size_t j = 0; j < rhs.cols(); ++j) {
            Complex s = rhs(kk, j);
            for (std::size_t i = kk + 1; i < n; ++i) s -= a(kk, i) * rhs(i, j);
            rhs(kk, j) = s / a(kk, kk);
        }
    }
    return rhs;
}

}  // namespace

VerificationReport oracle_verify_reduction(const DenseMatrix& a, const DenseMatrix& t,
                                           const DenseMatrix& c, const ScalarProduct& product,
                                           PatternKind pattern, double tol) {
    if (!a.is_square() || a.rows() != product.dim() || t.rows() != a.rows() ||
        t.cols() != a.cols() || c.rows() != a.rows() || c.cols() != a.cols()) {
        throw DimensionError("oracle_verify_reduction: size mismatch");
    }
    VerificationReport report;
    report.threshold = tol * std::max(1.0, a.frobenius_norm());

    const DenseMatrix& b = product.matrix();
    report.structure_residual = (t.conjugate_transpose() * b * t - b).frobenius_norm();
    report.structure_ok = report.structure_residual <= report.threshold;

    const DenseMatrix similar = elimination_solve(t, a * t);
    report.similarity_residual = (similar - c).frobenius_norm();
    report.similarity_ok = report.similarity_residual <= report.threshold;

    const PatternReport pat = check_pattern(c, pattern, tol);
    report.pattern_residual = pat.max_off_pattern;
    report.pattern_ok = pat.ok;

    const StructureReport ra = classify(a, product, tol);
    const StructureReport rc = classify(c, product, tol);
    report.class_preserved = ra.selfadjoint == rc.selfadjoint && ra.skewadjoint == rc.skewadjoint &&
                             ra.unitary == rc.unitary && ra.normal == rc.normal;

    report.pass = report.structure_ok && report.similarity_ok && report.pattern_ok &&
                  report.class_preserved;
    return report;
}

}  // namespace canonform::testkit
