#include "canonform/symplectic.hpp"

#include <algorithm>
#include <cmath>

#include "canonform/errors.hpp"
#include "canonform/scalar_product.hpp"
#include "canonform/special_matrices.hpp"

namespace canonform {

DenseMatrix to_perplectic_frame(const DenseMatrix& a, FrameDirection direction) {
    if (!a.is_square()) throw DimensionError("to_perplectic_frame: matrix must be square");
    if (a.rows() % 2 != 0) throw ParityError("to_perplectic_frame: size must be even");
    const DenseMatrix u = frame_unitary(a.rows());
    if (direction == FrameDirection::Forward) {
        return u * a * u.conjugate_transpose();
    }
    return u.conjugate_transpose() * a * u;
}

FourDiagResult normal_to_four_diagonal(const DenseMatrix& a, const ReductionOptions& opts) {
    if (!a.is_square()) throw DimensionError("normal_to_four_diagonal: matrix must be square");
    if (a.rows() % 2 != 0) throw ParityError("normal_to_four_diagonal: size must be even");
    const std::size_t n = a.rows();
    const ScalarProduct product = ScalarProduct::symplectic(n);
    if (!classify(a, product, opts.tol).normal) {
        throw NotNormalError("normal_to_four_diagonal: input is not J-normal within tolerance");
    }

    // The whole reduction delegates to the perplectic pipeline through the
    // frame unitary; NotNormal/Defective surface from there as well.
    const DenseMatrix a_perp = to_perplectic_frame(a, FrameDirection::Forward);
    const XFormResult x = normal_to_x(a_perp, opts);

    const DenseMatrix u = frame_unitary(n);
    FourDiagResult result;
    result.S = u.conjugate_transpose() * x.P * u;
    result.D4 = solve(result.S, a * result.S);

    const DenseMatrix j = product.matrix();
    result.residuals.transform_structure_residual =
        (result.S.conjugate_transpose() * j * result.S - j).frobenius_norm();
    result.residuals.similarity_residual = (a * result.S - result.S * result.D4).frobenius_norm();
    const std::size_t m = n / 2;
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t jj = 0; jj < n; ++jj) {
            if ((i % m) != (jj % m)) off = std::max(off, std::abs(result.D4(i, jj)));
        }
    }
    result.residuals.pattern_residual = off;
    result.residuals.add("x-form pattern", x.residuals.pattern_residual);
    result.residuals.add("x-form perplecticity", x.residuals.transform_structure_residual);
    return result;
}

}  // namespace canonform
