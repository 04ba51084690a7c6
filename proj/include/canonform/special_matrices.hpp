#pragma once

#include <cstddef>
#include <span>

#include "canonform/dense_matrix.hpp"

namespace canonform {

/// Anti-identity: ones on the anti-diagonal.
DenseMatrix exchange_matrix(std::size_t n);

/// [[0, I], [-I, 0]]; n must be even.
DenseMatrix symplectic_form(std::size_t n);

/// Orthogonal rotation (1/sqrt 2) [[I, R], [-R, I]] sending real diagonal
/// matrices to bisymmetric X-form; odd sizes embed the even rotation around
/// a fixed center entry.
DenseMatrix diag_to_x_rotation(std::size_t n);

/// Unitary diag(I_m, -i R_m) linking the symplectic and perplectic frames;
/// n = 2m must be even.
DenseMatrix frame_unitary(std::size_t n);

/// Center embedding of Q into the 2x2-block-partitioned P:
/// [[P11, 0, P12], [0, Q, 0], [P21, 0, P22]]. P must be even-sized.
DenseMatrix perplectic_sum(const DenseMatrix& p, const DenseMatrix& q);

/// Left-associative n-ary variant: ((P1 . P2) . P3) ...
DenseMatrix perplectic_sum(std::span<const DenseMatrix> parts);

/// Permutation R of size 2*half + core with R^{-1} (P . Q) R = P (+) Q for
/// every conformable P (2*half) and Q (core).
DenseMatrix unshuffle_permutation(std::size_t half, std::size_t core);

}  // namespace canonform
