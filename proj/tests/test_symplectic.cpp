#include <vector>

#include "canonform/dense_matrix.hpp"
#include "canonform/eigen.hpp"
#include "canonform/errors.hpp"
#include "canonform/scalar_product.hpp"
#include "canonform/special_matrices.hpp"
#include "canonform/symplectic.hpp"
#include "canonform/testkit.hpp"
#include "doctest.h"
#include "test_helpers.hpp"

using namespace canonform;
using namespace canonform::test;
using testkit::GeneratorSpec;
using testkit::MatrixClass;

namespace {

DenseMatrix random_structured_m(MatrixClass kind, std::size_t dim, std::uint64_t seed) {
    return testkit::random_structured(GeneratorSpec{kind, dim, seed, std::nullopt, 1e-3});
}

bool same_multiset(std::vector<Complex> a, std::vector<Complex> b, double tol) {
    if (a.size() != b.size()) return false;
    for (const Complex v : a) {
        double best = 1e99;
        std::size_t arg = b.size();
        for (std::size_t j = 0; j < b.size(); ++j) {
            if (std::abs(b[j] - v) < best) {
                best = std::abs(b[j] - v);
                arg = j;
            }
        }
        if (arg == b.size() || best > tol) return false;
        b.erase(b.begin() + static_cast<std::ptrdiff_t>(arg));
    }
    return true;
}

}  // namespace

TEST_SUITE_BEGIN("symplectic");

TEST_CASE("the frame map sends the symplectic form to i times the exchange matrix") {
    for (const std::size_t n : {2, 6}) {
        const DenseMatrix lhs = to_perplectic_frame(symplectic_form(n), FrameDirection::Forward);
        const DenseMatrix rhs = Complex(0.0, 1.0) * exchange_matrix(n);
        CHECK((lhs - rhs).max_abs() < 1e-15);
    }
}

TEST_CASE("frame round trip is the identity, and fixes the identity") {
    const DenseMatrix a = random_structured_m(MatrixClass::JNormal, 6, 201);
    const DenseMatrix round =
        to_perplectic_frame(to_perplectic_frame(a, FrameDirection::Forward), FrameDirection::Backward);
    CHECK(residual(round, a) < 1e-14 * rel_scale(a));

    const DenseMatrix id = DenseMatrix::identity(4);
    CHECK(residual(to_perplectic_frame(id, FrameDirection::Forward), id) == doctest::Approx(0.0));
    CHECK(residual(to_perplectic_frame(id, FrameDirection::Backward), id) == doctest::Approx(0.0));

    CHECK_THROWS_AS(to_perplectic_frame(DenseMatrix::identity(3), FrameDirection::Forward),
                    ParityError);
}

TEST_CASE("each symplectic-side class maps onto its perplectic counterpart") {
    const std::size_t n = 6;
    const ScalarProduct rp = ScalarProduct::perplectic(n);
    const ScalarProduct jp = ScalarProduct::symplectic(n);

    struct Row {
        MatrixClass kind;
        bool StructureReport::* j_flag;
        bool StructureReport::* r_flag;
    };
    const Row rows[] = {
        {MatrixClass::SkewHamiltonian, &StructureReport::selfadjoint, &StructureReport::selfadjoint},
        {MatrixClass::Hamiltonian, &StructureReport::skewadjoint, &StructureReport::skewadjoint},
        {MatrixClass::Symplectic, &StructureReport::unitary, &StructureReport::unitary},
        {MatrixClass::JNormal, &StructureReport::normal, &StructureReport::normal},
    };
    for (const Row& row : rows) {
        const DenseMatrix a = random_structured_m(row.kind, n, 202);
        CHECK(classify(a, jp, 1e-8).*row.j_flag);
        const DenseMatrix forward = to_perplectic_frame(a, FrameDirection::Forward);
        CHECK(classify(forward, rp, 1e-8).*row.r_flag);
        CHECK(residual(to_perplectic_frame(forward, FrameDirection::Backward), a) <
              1e-13 * rel_scale(a));
    }
}

TEST_CASE("a diagonal matrix is already four-diagonal") {
    const std::vector<Complex> d = {{1.0, 0.5}, {2.0, 0.0}, {-1.0, 1.0}, {0.5, -2.0}};
    const DenseMatrix a = DenseMatrix::diagonal(d);
    REQUIRE(classify(a, ScalarProduct::symplectic(4), 1e-10).normal);
    const FourDiagResult res = normal_to_four_diagonal(a);
    CHECK(res.residuals.pattern_residual < 1e-10);
    CHECK(symplectic_defect(res.S) < 1e-10);
    CHECK(same_multiset(eig(res.D4).values, d, 1e-8));
}

TEST_CASE("the symplectic form itself reduces trivially at size two") {
    const DenseMatrix j = symplectic_form(2);
    const FourDiagResult res = normal_to_four_diagonal(j);
    CHECK(res.residuals.pattern_residual < 1e-12);
    CHECK(symplectic_defect(res.S) < 1e-10);
}

TEST_CASE("normal_to_four_diagonal recovers planted spectra") {
    for (const std::uint64_t seed : {203u, 204u}) {
        for (const std::size_t n : {4, 8}) {
            const DenseMatrix a = random_structured_m(MatrixClass::JNormal, n, seed);
            const FourDiagResult res = normal_to_four_diagonal(a);
            const double scale = rel_scale(a);
            CHECK(symplectic_defect(res.S) < 1e-8 * scale);
            CHECK(res.residuals.pattern_residual < 1e-8 * scale);
            CHECK(res.residuals.similarity_residual < 1e-8 * scale);
            CHECK(same_multiset(eig(res.D4).values, eig(a).values, 1e-8 * scale));
            CHECK(testkit::check_pattern(res.D4, testkit::PatternKind::FourDiagonal, 1e-8).ok);
        }
    }
}

TEST_CASE("the reduction covers every symplectic-side structured class") {
    const MatrixClass kinds[] = {MatrixClass::SkewHamiltonian, MatrixClass::Hamiltonian,
                                 MatrixClass::Symplectic};
    for (const MatrixClass kind : kinds) {
        const DenseMatrix a = random_structured_m(kind, 6, 206);
        const FourDiagResult res = normal_to_four_diagonal(a);
        const auto verdict = testkit::oracle_verify_reduction(
            a, res.S, res.D4, ScalarProduct::symplectic(6), testkit::PatternKind::FourDiagonal,
            1e-8);
        CHECK(verdict.pass);
    }
}

TEST_CASE("normal_to_four_diagonal rejects bad input") {
    CHECK_THROWS_AS(normal_to_four_diagonal(DenseMatrix::identity(3)), ParityError);
    // Not J-normal: generic random matrix.
    testkit::SplitMix64 rng(205);
    const DenseMatrix g = random_dense(4, 4, rng);
    CHECK_THROWS_AS(normal_to_four_diagonal(g), NotNormalError);
}

TEST_SUITE_END();
