#pragma once

#include <cstddef>

#include "canonform/defaults.hpp"
#include "canonform/dense_matrix.hpp"

namespace canonform {

enum class ProductKind { Perplectic, Symplectic };

/// The indefinite scalar product in force: [x,y] = x^H B y with B either the
/// anti-identity (perplectic) or the skew form J (symplectic, even size).
class ScalarProduct {
public:
    static ScalarProduct perplectic(std::size_t dim);
    static ScalarProduct symplectic(std::size_t dim);

    ProductKind kind() const { return kind_; }
    std::size_t dim() const { return dim_; }
    const DenseMatrix& matrix() const { return matrix_; }

    /// B^{-1} A^H B without a general inversion: the perplectic form is
    /// involutory and the symplectic form satisfies J^{-1} = -J.
    DenseMatrix adjoint(const DenseMatrix& a) const;

private:
    ScalarProduct(ProductKind kind, std::size_t dim, DenseMatrix matrix);

    ProductKind kind_;
    std::size_t dim_;
    DenseMatrix matrix_;
};

DenseMatrix adjoint_star(const DenseMatrix& a, const ScalarProduct& product);

struct ResidualValue {
    double frobenius = 0.0;
    double spectral_estimate = 0.0;
};

/// Residuals of A against the four structure classes. Booleans use the
/// Frobenius residual against tol * max(1, ||A||_F); the spectral estimates
/// are informational.
struct StructureReport {
    double input_frobenius = 0.0;
    double input_spectral_estimate = 0.0;
    double tolerance = 0.0;
    double threshold = 0.0;

    ResidualValue selfadjoint_residual;
    ResidualValue skewadjoint_residual;
    ResidualValue unitary_residual;
    ResidualValue normal_residual;

    bool selfadjoint = false;
    bool skewadjoint = false;
    bool unitary = false;
    bool normal = false;
};

StructureReport classify(const DenseMatrix& a, const ScalarProduct& product,
                         double tol = kDefaultTolerance);

}  // namespace canonform
