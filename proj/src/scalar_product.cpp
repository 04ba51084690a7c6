#include "canonform/scalar_product.hpp"

#include <algorithm>
#include <utility>

#include "canonform/errors.hpp"
#include "canonform/special_matrices.hpp"

namespace canonform {

ScalarProduct::ScalarProduct(ProductKind kind, std::size_t dim, DenseMatrix matrix)
    : kind_(kind), dim_(dim), matrix_(std::move(matrix)) {}

ScalarProduct ScalarProduct::perplectic(std::size_t dim) {
    return ScalarProduct(ProductKind::Perplectic, dim, exchange_matrix(dim));
}

ScalarProduct ScalarProduct::symplectic(std::size_t dim) {
    if (dim % 2 != 0) throw ParityError("ScalarProduct::symplectic: size must be even");
    return ScalarProduct(ProductKind::Symplectic, dim, symplectic_form(dim));
}

DenseMatrix ScalarProduct::adjoint(const DenseMatrix& a) const {
    if (!a.is_square() || a.rows() != dim_) {
        throw DimensionError("adjoint: matrix size does not match scalar product");
    }
    const DenseMatrix ah = a.conjugate_transpose();
    if (kind_ == ProductKind::Perplectic) {
        return matrix_ * ah * matrix_;
    }
    // J^{-1} A^H J = -J A^H J
    return -(matrix_ * ah * matrix_);
}

DenseMatrix adjoint_star(const DenseMatrix& a, const ScalarProduct& product) {
    return product.adjoint(a);
}

namespace {

ResidualValue residual_of(const DenseMatrix& m) {
    return ResidualValue{m.frobenius_norm(), spectral_norm_estimate(m)};
}

}  // namespace

StructureReport classify(const DenseMatrix& a, const ScalarProduct& product, double tol) {
    if (!a.is_square() || a.rows() != product.dim()) {
        throw DimensionError("classify: matrix size does not match scalar product");
    }
    if (tol < 0.0) throw Error("classify: tolerance must be nonnegative");

    const DenseMatrix star = product.adjoint(a);
    const DenseMatrix& b = product.matrix();

    StructureReport report;
    report.input_frobenius = a.frobenius_norm();
    report.input_spectral_estimate = spectral_norm_estimate(a);
    report.tolerance = tol;
    report.threshold = tol * std::max(1.0, report.input_frobenius);

    report.selfadjoint_residual = residual_of(a - star);
    report.skewadjoint_residual = residual_of(a + star);
    report.unitary_residual = residual_of(a.conjugate_transpose() * b * a - b);
    report.normal_residual = residual_of(a * star - star * a);

    report.selfadjoint = report.selfadjoint_residual.frobenius <= report.threshold;
    report.skewadjoint = report.skewadjoint_residual.frobenius <= report.threshold;
    report.unitary = report.unitary_residual.frobenius <= report.threshold;
    report.normal = report.normal_residual.frobenius <= report.threshold;
    return report;
}

}  // namespace canonform
