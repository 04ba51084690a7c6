#include <algorithm>
#include <vector>

#include "canonform/dense_matrix.hpp"
#include "canonform/eigen.hpp"
#include "canonform/errors.hpp"
#include "canonform/special_matrices.hpp"
#include "canonform/testkit.hpp"
#include "doctest.h"
#include "test_helpers.hpp"

using namespace canonform;
using namespace canonform::test;
using testkit::SplitMix64;

namespace {

// Multisets equal within tolerance, by greedy matching.
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

TEST_SUITE_BEGIN("eigen");

TEST_CASE("schur is a no-op on upper triangular input") {
    DenseMatrix a(3, 3);
    a(0, 0) = Complex(1, 1);
    a(0, 1) = 2.0;
    a(0, 2) = 3.0;
    a(1, 1) = Complex(-2, 0.5);
    a(1, 2) = -1.0;
    a(2, 2) = 4.0;
    const SchurDecomposition sch = schur(a);
    CHECK(sch.iterations == 0);
    CHECK(residual(sch.T, a) == doctest::Approx(0.0));
    CHECK(residual(sch.Q, DenseMatrix::identity(3)) == doctest::Approx(0.0));
}

TEST_CASE("schur finds the rotation spectrum") {
    const DenseMatrix a{{0.0, 1.0}, {-1.0, 0.0}};
    const SchurDecomposition sch = schur(a);
    std::vector<Complex> values = sch.T.diagonal_entries();
    CHECK(same_multiset(values, {Complex(0, 1), Complex(0, -1)}, 1e-14));
}

TEST_CASE("schur reconstruction and unitarity residuals on random input") {
    SplitMix64 rng(41);
    for (const std::size_t n : {2, 5, 8, 13}) {
        const DenseMatrix a = random_dense(n, n, rng);
        const SchurDecomposition sch = schur(a);
        CHECK(residual(sch.Q * sch.T * sch.Q.conjugate_transpose(), a) < 1e-12 * a.frobenius_norm());
        CHECK(residual(sch.Q.conjugate_transpose() * sch.Q, DenseMatrix::identity(n)) < 1e-12);
        for (std::size_t i = 1; i < n; ++i)
            for (std::size_t j = 0; j < i; ++j) CHECK(sch.T(i, j) == Complex(0.0, 0.0));
    }
}

TEST_CASE("eig on a diagonal matrix returns exact unit vectors") {
    const std::vector<Complex> d = {2.0, 3.0};
    const EigenDecomposition ed = eig(DenseMatrix::diagonal(d));
    CHECK(same_multiset(ed.values, {Complex(2.0), Complex(3.0)}, 1e-15));
    for (std::size_t j = 0; j < 2; ++j) {
        Complex lambda = ed.values[j];
        for (std::size_t i = 0; i < 2; ++i) {
            const double expected = (d[i] == lambda) ? 1.0 : 0.0;
            CHECK(std::abs(std::abs(ed.vectors(i, j)) - expected) < 1e-15);
        }
    }
}

TEST_CASE("repeated eigenvalues form a single cluster") {
    const std::vector<Complex> d = {1.0, 1.0};
    const EigenDecomposition ed = eig(DenseMatrix::diagonal(d));
    REQUIRE(ed.clusters.size() == 1);
    CHECK(ed.clusters[0].multiplicity == 2);
    CHECK(std::abs(ed.clusters[0].value - Complex(1.0)) < 1e-15);
}

TEST_CASE("construct-then-recover on a random diagonalizable matrix") {
    SplitMix64 rng(42);
    const std::size_t n = 6;
    std::vector<Complex> lambda(n);
    for (std::size_t i = 0; i < n; ++i) {
        lambda[i] = Complex(static_cast<double>(i) - 2.0, 0.7 * static_cast<double>(i % 3) - 0.7);
    }
    const DenseMatrix v = random_invertible(n, rng);
    const DenseMatrix a = v * DenseMatrix::diagonal(lambda) * inverse(v);
    const EigenDecomposition ed = eig(a);
    CHECK(same_multiset(ed.values, lambda, 1e-8));
}

TEST_CASE("eig columns satisfy the eigenvalue equation") {
    SplitMix64 rng(43);
    for (const std::size_t n : {4, 9}) {
        const DenseMatrix a = random_dense(n, n, rng);
        const EigenDecomposition ed = eig(a);
        for (std::size_t j = 0; j < n; ++j) {
            DenseMatrix vj(n, 1);
            for (std::size_t i = 0; i < n; ++i) vj(i, 0) = ed.vectors(i, j);
            CHECK(std::abs(vj.frobenius_norm() - 1.0) < 1e-12);
            CHECK((a * vj - ed.values[j] * vj).frobenius_norm() < 1e-10 * a.frobenius_norm());
        }
    }
}

TEST_CASE("eigenvalues are invariant under permutation similarity") {
    SplitMix64 rng(44);
    const std::size_t n = 7;
    const DenseMatrix a = random_dense(n, n, rng);
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    for (std::size_t i = n; i-- > 1;) std::swap(perm[i], perm[rng.next_u64() % (i + 1)]);
    DenseMatrix p(n, n);
    for (std::size_t j = 0; j < n; ++j) p(perm[j], j) = 1.0;
    CHECK(same_multiset(eig(a).values, eig(p.transpose() * a * p).values, 1e-9 * rel_scale(a)));
}

TEST_CASE("diagonalizability verdicts") {
    CHECK_FALSE(check_diagonalizable(DenseMatrix{{1.0, 1.0}, {0.0, 1.0}}).diagonalizable);
    CHECK(check_diagonalizable(DenseMatrix::identity(5)).diagonalizable);

    SplitMix64 rng(45);
    const std::size_t n = 5;
    std::vector<Complex> lambda(n);
    for (std::size_t i = 0; i < n; ++i) lambda[i] = Complex(static_cast<double>(i), 0.3);
    const DenseMatrix v = random_invertible(n, rng);
    CHECK(check_diagonalizable(v * DenseMatrix::diagonal(lambda) * inverse(v)).diagonalizable);
}

TEST_CASE("simultaneous diagonalization of simple commuting pairs") {
    const DenseMatrix a = DenseMatrix::identity(2);
    const std::vector<Complex> d = {1.0, 2.0};
    const DenseMatrix b = DenseMatrix::diagonal(d);
    const DenseMatrix t = simultaneous_diagonalize(a, b);
    const DenseMatrix db = solve(t, b * t);
    CHECK(std::abs(db(0, 1)) + std::abs(db(1, 0)) < 1e-12);
}

TEST_CASE("simultaneous diagonalization resolves a cluster of the first matrix") {
    // A has a double eigenvalue; B acts inside that eigenspace.
    const std::vector<Complex> da = {1.0, 1.0, 2.0};
    const DenseMatrix a0 = DenseMatrix::diagonal(da);
    DenseMatrix b0(3, 3);
    b0(0, 0) = 1.0;
    b0(0, 1) = 2.0;
    b0(1, 0) = 2.0;
    b0(1, 1) = 1.0;
    b0(2, 2) = 5.0;
    SplitMix64 rng(46);
    const DenseMatrix v = random_invertible(3, rng);
    const DenseMatrix a = v * a0 * inverse(v);
    const DenseMatrix b = v * b0 * inverse(v);

    const DenseMatrix t = simultaneous_diagonalize(a, b, 1e-8);
    auto offdiag = [](const DenseMatrix& m) {
        double sum = 0.0;
        for (std::size_t i = 0; i < m.rows(); ++i)
            for (std::size_t j = 0; j < m.cols(); ++j)
                if (i != j) sum += std::norm(m(i, j));
        return std::sqrt(sum);
    };
    CHECK(offdiag(solve(t, a * t)) < 1e-8 * rel_scale(a));
    CHECK(offdiag(solve(t, b * t)) < 1e-8 * rel_scale(b));
}

TEST_CASE("simultaneous diagonalization rejects bad inputs") {
    const DenseMatrix x{{0.0, 1.0}, {0.0, 0.0}};
    const DenseMatrix y{{0.0, 0.0}, {1.0, 0.0}};
    CHECK_THROWS_AS(simultaneous_diagonalize(x, y), NotCommutingError);

    const DenseMatrix jordan{{1.0, 1.0}, {0.0, 1.0}};
    CHECK_THROWS_AS(simultaneous_diagonalize(jordan, DenseMatrix::identity(2)), DefectiveError);
}

TEST_CASE("inertia of the exchange matrix splits ceil/floor") {
    const InertiaCongruence two = inertia_congruence(exchange_matrix(2), HermitianKind::Hermitian);
    CHECK(two.n_plus == 1);
    CHECK(two.n_minus == 1);
    const InertiaCongruence five = inertia_congruence(exchange_matrix(5), HermitianKind::Hermitian);
    CHECK(five.n_plus == 3);
    CHECK(five.n_minus == 2);

    DenseMatrix expected(5, 5);
    for (std::size_t i = 0; i < 5; ++i) expected(i, i) = i < 3 ? 1.0 : -1.0;
    CHECK(residual(five.Q.conjugate_transpose() * exchange_matrix(5) * five.Q, expected) < 1e-12);
}

TEST_CASE("inertia congruence scales a diagonal matrix") {
    const std::vector<Complex> d = {4.0, -9.0};
    const InertiaCongruence res = inertia_congruence(DenseMatrix::diagonal(d), HermitianKind::Hermitian);
    CHECK(res.n_plus == 1);
    CHECK(res.n_minus == 1);
    const std::vector<Complex> expected = {0.5, Complex(1.0 / 3.0)};
    CHECK(residual(res.Q, DenseMatrix::diagonal(expected)) < 1e-15);
}

TEST_CASE("skew-Hermitian inertia lands on the imaginary signature") {
    const DenseMatrix j = symplectic_form(2);
    const InertiaCongruence res = inertia_congruence(j, HermitianKind::SkewHermitian);
    CHECK(res.n_plus == 1);
    CHECK(res.n_minus == 1);
    DenseMatrix expected(2, 2);
    expected(0, 0) = Complex(0.0, 1.0);
    expected(1, 1) = Complex(0.0, -1.0);
    CHECK(residual(res.Q.conjugate_transpose() * j * res.Q, expected) < 1e-12);
}

TEST_CASE("signature is invariant under congruence") {
    SplitMix64 rng(47);
    const std::size_t n = 6;
    DenseMatrix h = random_dense(n, n, rng);
    h = Complex(0.5, 0.0) * (h + h.conjugate_transpose());
    const InertiaCongruence base = inertia_congruence(h, HermitianKind::Hermitian);
    for (int trial = 0; trial < 5; ++trial) {
        const DenseMatrix m = random_invertible(n, rng);
        const InertiaCongruence moved =
            inertia_congruence(m.conjugate_transpose() * h * m, HermitianKind::Hermitian);
        CHECK(moved.n_plus == base.n_plus);
        CHECK(moved.n_minus == base.n_minus);
    }
}

TEST_CASE("inertia congruence rejects singular and non-Hermitian input") {
    CHECK_THROWS_AS(inertia_congruence(DenseMatrix(3, 3), HermitianKind::Hermitian), SingularError);
    CHECK_THROWS_AS(inertia_congruence(DenseMatrix{{0.0, 1.0}, {0.0, 0.0}}, HermitianKind::Hermitian),
                    NotHermitianError);
}

TEST_CASE("matrix exponential basics") {
    CHECK(residual(matrix_exp(DenseMatrix(4, 4)), DenseMatrix::identity(4)) == doctest::Approx(0.0));

    const std::vector<Complex> d = {Complex(0.3, -1.2), Complex(-2.0, 0.0), Complex(0.0, 3.1)};
    const DenseMatrix ed = matrix_exp(DenseMatrix::diagonal(d));
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(std::abs(ed(i, i) - std::exp(d[i])) < 1e-14 * std::abs(std::exp(d[i])));
    }

    SplitMix64 rng(48);
    const DenseMatrix k = random_dense(5, 5, rng);
    CHECK(residual(matrix_exp(k) * matrix_exp(-k), DenseMatrix::identity(5)) < 1e-10);

    DenseMatrix huge = DenseMatrix::identity(2);
    huge *= Complex(1e6, 0.0);
    CHECK_THROWS_AS(matrix_exp(huge), OverflowError);
}

TEST_CASE("exponentials of form-skew generators are form-unitary") {
    // Tangent-space generators exponentiate into the structure group.
    SplitMix64 rng(49);
    for (const std::size_t n : {3, 6}) {
        DenseMatrix g = random_dense(n, n, rng);
        const DenseMatrix r = exchange_matrix(n);
        DenseMatrix k = Complex(0.5, 0.0) * (g - r * g.conjugate_transpose() * r);
        k *= Complex(1.0 / std::max(1.0, k.frobenius_norm()), 0.0);
        CHECK(perplectic_defect(matrix_exp(k)) < 1e-10);
    }
}

TEST_SUITE_END();
