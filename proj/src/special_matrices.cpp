#include "canonform/special_matrices.hpp"

#include <cmath>

#include "canonform/errors.hpp"

namespace canonform {

DenseMatrix exchange_matrix(std::size_t n) {
    DenseMatrix r(n, n);
    for (std::size_t i = 0; i < n; ++i) r(i, n - 1 - i) = 1.0;
    return r;
}

DenseMatrix symplectic_form(std::size_t n) {
    if (n % 2 != 0) throw ParityError("symplectic_form: size must be even");
    const std::size_t m = n / 2;
    DenseMatrix j(n, n);
    for (std::size_t i = 0; i < m; ++i) {
        j(i, m + i) = 1.0;
        j(m + i, i) = -1.0;
    }
    return j;
}

DenseMatrix diag_to_x_rotation(std::size_t n) {
    if (n % 2 != 0) {
        if (n == 0) return DenseMatrix();
        return perplectic_sum(diag_to_x_rotation(n - 1), DenseMatrix::identity(1));
    }
    const std::size_t m = n / 2;
    const double s = 1.0 / std::sqrt(2.0);
    DenseMatrix z(n, n);
    for (std::size_t i = 0; i < m; ++i) {
        z(i, i) = s;
        z(i, m + (m - 1 - i)) = s;
        z(m + i, m + i) = s;
        z(m + i, m - 1 - i) = -s;
    }
    return z;
}

DenseMatrix frame_unitary(std::size_t n) {
    if (n % 2 != 0) throw ParityError("frame_unitary: size must be even");
    const std::size_t m = n / 2;
    DenseMatrix u(n, n);
    for (std::size_t i = 0; i < m; ++i) {
        u(i, i) = 1.0;
        u(m + i, m + (m - 1 - i)) = Complex(0.0, -1.0);
    }
    return u;
}

DenseMatrix perplectic_sum(const DenseMatrix& p, const DenseMatrix& q) {
    if (!p.is_square() || !q.is_square()) throw DimensionError("perplectic_sum: parts must be square");
    if (p.rows() % 2 != 0) throw ParityError("perplectic_sum: left operand must be even-sized");
    const std::size_t half = p.rows() / 2;
    const std::size_t core = q.rows();
    const std::size_t n = 2 * half + core;
    DenseMatrix out(n, n);
    out.set_block(0, 0, p.block(0, 0, half, half));
    out.set_block(0, half + core, p.block(0, half, half, half));
    out.set_block(half, half, q);
    out.set_block(half + core, 0, p.block(half, 0, half, half));
    out.set_block(half + core, half + core, p.block(half, half, half, half));
    return out;
}

DenseMatrix perplectic_sum(std::span<const DenseMatrix> parts) {
    if (parts.empty()) throw DimensionError("perplectic_sum: no operands");
    DenseMatrix acc = parts[0];
    for (std::size_t i = 1; i < parts.size(); ++i) acc = perplectic_sum(acc, parts[i]);
    return acc;
}

DenseMatrix unshuffle_permutation(std::size_t half, std::size_t core) {
    const std::size_t n = 2 * half + core;
    DenseMatrix r(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        std::size_t src;
        if (j < half) {
            src = j;
        } else if (j < 2 * half) {
            src = j + core;
        } else {
            src = j - half;
        }
        r(src, j) = 1.0;
    }
    return r;
}

}  // namespace canonform
