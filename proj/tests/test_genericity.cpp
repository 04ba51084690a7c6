#include <limits>
#include <vector>

#include "canonform/dense_matrix.hpp"
#include "canonform/eigen.hpp"
#include "canonform/errors.hpp"
#include "canonform/genericity.hpp"
#include "canonform/scalar_product.hpp"
#include "canonform/symplectic.hpp"
#include "canonform/testkit.hpp"
#include "doctest.h"
#include "test_helpers.hpp"

using namespace canonform;
using namespace canonform::test;
using testkit::GeneratorSpec;
using testkit::MatrixClass;

namespace {

double min_gap(const std::vector<Complex>& values) {
    double gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < values.size(); ++i)
        for (std::size_t j = i + 1; j < values.size(); ++j)
            gap = std::min(gap, std::abs(values[i] - values[j]));
    return gap;
}

DenseMatrix random_structured_m(MatrixClass kind, std::size_t dim, std::uint64_t seed) {
    return testkit::random_structured(GeneratorSpec{kind, dim, seed, std::nullopt, 1e-3});
}

}  // namespace

TEST_SUITE_BEGIN("genericity");

TEST_CASE("witness for the identity with a pinned coefficient") {
    const DenseMatrix a = DenseMatrix::identity(2);
    const std::vector<Complex> alphas = {Complex(0.0, 0.0)};
    const DenseMatrix m =
        commuting_distinct_witness(a, ScalarProduct::perplectic(2), alphas);
    CHECK((m * a - a * m).frobenius_norm() == doctest::Approx(0.0));
    const std::vector<Complex> values = eig(m).values;
    CHECK(min_gap(values) > 0.5);  // {alpha, 1 + alpha} stays one apart
}

TEST_CASE("witness with unit coefficients reproduces a distinct-spectrum matrix") {
    // All blocks already have distinct eigenvalues, so alpha = 1 scales each
    // block by one: the witness is the matrix itself.
    const DenseMatrix a = random_structured_m(MatrixClass::RNormal, 6, 301);
    REQUIRE(min_gap(eig(a).values) > 1e-3);
    const std::vector<Complex> alphas(3, Complex(1.0, 0.0));
    const DenseMatrix m = commuting_distinct_witness(a, ScalarProduct::perplectic(6), alphas);
    CHECK(residual(m, a) < 1e-9 * rel_scale(a));
}

TEST_CASE("witness commutes with the matrix and its adjoint") {
    for (const std::uint64_t seed : {302u, 303u, 304u}) {
        const DenseMatrix a = random_structured_m(MatrixClass::RNormal, 4, seed);
        const ScalarProduct rp = ScalarProduct::perplectic(4);
        const DenseMatrix m = commuting_distinct_witness(a, rp);
        const double scale = rel_scale(a) * rel_scale(m);
        CHECK((m * a - a * m).frobenius_norm() < 1e-8 * scale);
        const DenseMatrix star = adjoint_star(a, rp);
        CHECK((m * star - star * m).frobenius_norm() < 1e-8 * scale);
        CHECK(eig(m).values.size() == 4);
        CHECK(min_gap(eig(m).values) >= 1e-6);
        CHECK(classify(m, rp, 1e-8).normal);
    }
}

TEST_CASE("witness through the symplectic frame") {
    const DenseMatrix a = random_structured_m(MatrixClass::JNormal, 4, 305);
    const ScalarProduct jp = ScalarProduct::symplectic(4);
    const DenseMatrix m = commuting_distinct_witness(a, jp);
    const double scale = rel_scale(a) * rel_scale(m);
    CHECK((m * a - a * m).frobenius_norm() < 1e-8 * scale);
    const DenseMatrix star = adjoint_star(a, jp);
    CHECK((m * star - star * m).frobenius_norm() < 1e-8 * scale);
    CHECK(min_gap(eig(m).values) >= 1e-6);
}

TEST_CASE("discriminant closed forms") {
    CHECK(std::abs(discriminant(DenseMatrix{{0.0, 1.0}, {0.0, 0.0}})) < 1e-14);

    const std::vector<Complex> d12 = {1.0, 2.0};
    CHECK(std::abs(discriminant(DenseMatrix::diagonal(d12)) - Complex(1.0)) < 1e-12);

    // Hand oracle: prod_{i<j} (li - lj)^2 = 1 * 4 * 1 = 4.
    const std::vector<Complex> d123 = {1.0, 2.0, 3.0};
    CHECK(std::abs(discriminant(DenseMatrix::diagonal(d123)) - Complex(4.0)) < 1e-10);

    CHECK_THROWS_AS(discriminant(DenseMatrix::identity(13)), SizeCapError);
}

TEST_CASE("discriminant matches the eigenvalue product oracle") {
    testkit::SplitMix64 rng(306);
    for (int trial = 0; trial < 10; ++trial) {
        const std::size_t n = 2 + trial % 5;
        const DenseMatrix a = random_dense(n, n, rng);
        const std::vector<Complex> values = eig(a).values;
        Complex oracle(1.0, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                oracle *= (values[i] - values[j]) * (values[i] - values[j]);
        const Complex fast = discriminant(a);
        CHECK(std::abs(fast - oracle) < 1e-6 * std::max(1.0, std::abs(oracle)));
    }
}

TEST_CASE("perturbation certificate on the identity") {
    const PerturbationCertificate cert =
        perturb_to_distinct(DenseMatrix::identity(2), ScalarProduct::perplectic(2), 0.1, 7);
    CHECK(cert.distance_frobenius < 0.1);
    CHECK(cert.distance_frobenius > 0.0);
    CHECK(cert.min_gap >= 1e-6);
    CHECK(classify(cert.perturbed, ScalarProduct::perplectic(2), 1e-8).normal);
}

TEST_CASE("a matrix with distinct eigenvalues perturbs to itself") {
    const DenseMatrix a = random_structured_m(MatrixClass::RNormal, 5, 307);
    REQUIRE(min_gap(eig(a).values) > 1e-3);
    const PerturbationCertificate cert =
        perturb_to_distinct(a, ScalarProduct::perplectic(5), 1e-4, 11);
    CHECK(cert.coefficient == Complex(0.0, 0.0));
    CHECK(cert.distance_frobenius == 0.0);
}

TEST_CASE("forced double eigenvalues split under perturbation") {
    for (const std::uint64_t seed : {308u, 309u, 310u}) {
        const std::vector<Complex> spectrum = {{1.0, 1.0}, {1.0, 1.0}, {-2.0, 0.0}, {0.5, -1.0}};
        const DenseMatrix a = testkit::random_structured(
            GeneratorSpec{MatrixClass::JNormal, 4, seed, spectrum, 1e-3});
        const ScalarProduct jp = ScalarProduct::symplectic(4);
        REQUIRE(classify(a, jp, 1e-8).normal);
        REQUIRE(min_gap(eig(a).values) < 1e-8);

        const double epsilon = 1e-4;
        const PerturbationCertificate cert = perturb_to_distinct(a, jp, epsilon, seed);
        CHECK(cert.distance_frobenius < epsilon);
        CHECK(cert.min_gap >= 1e-6);
        CHECK(cert.normality_residual <= 1e-8 * rel_scale(cert.perturbed));
    }
}

TEST_CASE("perturbation rejects defective input") {
    // Per-Hermitian Jordan block: R-normal but not diagonalizable.
    const DenseMatrix jordan{{1.0, 1.0}, {0.0, 1.0}};
    CHECK_THROWS_AS(perturb_to_distinct(jordan, ScalarProduct::perplectic(2), 0.1, 3),
                    DefectiveError);
}

TEST_CASE("density experiment: random samples admit the reduction") {
    // 100 seeded B-normal samples (a third with a forced double eigenvalue):
    // every one must reach its canonical form, with at most one fallback
    // perturbation allowed per sample.
    std::size_t successes = 0;
    const std::size_t total = 100;
    for (std::uint64_t seed = 0; seed < total; ++seed) {
        const bool symplectic_side = seed % 2 == 1;
        const std::size_t n = symplectic_side ? 4 : 4 + seed % 3;
        std::optional<std::vector<Complex>> spectrum;
        if (seed % 3 == 0) {
            spectrum = std::vector<Complex>(n);
            testkit::SplitMix64 rng(900 + seed);
            const Complex doubled(rng.next_uniform(-2.0, 2.0), rng.next_uniform(-2.0, 2.0));
            (*spectrum)[0] = doubled;
            (*spectrum)[1] = doubled;
            for (std::size_t i = 2; i < n; ++i) {
                (*spectrum)[i] =
                    doubled + std::polar(0.5 + rng.next_double(), rng.next_uniform(0.0, 6.28));
            }
        }
        const MatrixClass kind = symplectic_side ? MatrixClass::JNormal : MatrixClass::RNormal;
        DenseMatrix a = testkit::random_structured(GeneratorSpec{kind, n, 950 + seed, spectrum, 1e-3});
        const ScalarProduct product =
            symplectic_side ? ScalarProduct::symplectic(n) : ScalarProduct::perplectic(n);

        for (int attempt = 0; attempt < 2; ++attempt) {
            try {
                if (symplectic_side) {
                    const FourDiagResult res = normal_to_four_diagonal(a);
                    if (res.residuals.pattern_residual <= 1e-8 * rel_scale(a)) ++successes;
                } else {
                    const XFormResult res = normal_to_x(a);
                    if (res.residuals.pattern_residual <= 1e-8 * rel_scale(a)) ++successes;
                }
                break;
            } catch (const Error&) {
                if (attempt == 1) break;
                a = perturb_to_distinct(a, product, 1e-6, seed).perturbed;
            }
        }
    }
    CHECK(successes == total);
}

TEST_SUITE_END();
