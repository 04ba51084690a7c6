#include "canonform/perplectic.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

#include "canonform/eigen.hpp"
#include "canonform/errors.hpp"
#include "canonform/scalar_product.hpp"
#include "canonform/special_matrices.hpp"

namespace canonform {

namespace {

double norm_scale(const DenseMatrix& a) { return std::max(1.0, a.frobenius_norm()); }

DenseMatrix per_adjoint(const DenseMatrix& a) {
    const DenseMatrix r = exchange_matrix(a.rows());
    return r * a.conjugate_transpose() * r;
}

void require_per_hermitian(const DenseMatrix& a, double tol, const char* who) {
    if ((a - per_adjoint(a)).frobenius_norm() > 10.0 * tol * norm_scale(a)) {
        throw NotHermitianError(std::string(who) + ": input is not per-Hermitian within tolerance");
    }
}

// (S^{-1})* = R S^{-H} R in the perplectic product.
DenseMatrix inverse_adjoint(const DenseMatrix& s) {
    const DenseMatrix r = exchange_matrix(s.rows());
    return r * inverse(s).conjugate_transpose() * r;
}

// C with C^H G C = R for a nonsingular Hermitian G congruent to the
// anti-identity.
DenseMatrix congruence_to_exchange(const DenseMatrix& g, double tol) {
    const std::size_t k = g.rows();
    if (k == 0) return DenseMatrix(0, 0);
    const InertiaCongruence inertia = inertia_congruence(g, HermitianKind::Hermitian, tol);
    if (inertia.n_plus != (k + 1) / 2) {
        throw CongruenceError("congruence_to_exchange: inertia does not match the anti-identity");
    }
    return inertia.Q * diag_to_x_rotation(k);
}

double perplecticity_residual(const DenseMatrix& p) {
    const DenseMatrix r = exchange_matrix(p.rows());
    return (p.conjugate_transpose() * r * p - r).frobenius_norm();
}

// One peel level: perplectic P with P^{-1} A P = (lambda I (+) conj lambda I) . A'
// for the cluster with the largest positive imaginary part. Returns the
// identity and multiplicity 0 when the spectrum is already real.
struct PeelStep {
    DenseMatrix P;
    std::size_t multiplicity = 0;
    double gram_pattern_residual = 0.0;
    double corner_condition = 1.0;
};

PeelStep peel_step(const DenseMatrix& a, const ReductionOptions& opts) {
    const std::size_t n = a.rows();
    const double scale = norm_scale(a);
    const double real_threshold = opts.cluster_tol * scale;

    const EigenDecomposition ed = eig(a, opts.cluster_tol);
    PeelStep step;
    if (ed.clusters.empty() || ed.clusters.front().value.imag() <= real_threshold) {
        step.P = DenseMatrix::identity(n);
        return step;
    }

    const EigenCluster& top = ed.clusters.front();
    const Complex target = std::conj(top.value);
    std::size_t partner = ed.clusters.size();
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t c = 1; c < ed.clusters.size(); ++c) {
        const double d = std::abs(ed.clusters[c].value - target);
        if (d < best) {
            best = d;
            partner = c;
        }
    }
    if (partner == ed.clusters.size() || best > real_threshold) {
        throw ConjugatePairMismatchError("peel_nonreal: no conjugate cluster within tolerance");
    }
    if (ed.clusters[partner].multiplicity != top.multiplicity) {
        throw ConjugatePairMismatchError("peel_nonreal: conjugate cluster multiplicities differ");
    }

    const std::size_t m1 = top.multiplicity;
    std::vector<std::size_t> order(top.column_indices);
    for (std::size_t c = 0; c < ed.clusters.size(); ++c) {
        if (c == 0 || c == partner) continue;
        order.insert(order.end(), ed.clusters[c].column_indices.begin(),
                     ed.clusters[c].column_indices.end());
    }
    order.insert(order.end(), ed.clusters[partner].column_indices.begin(),
                 ed.clusters[partner].column_indices.end());

    const DenseMatrix u0 = ed.vectors.selected_columns(order);
    const DenseMatrix r = exchange_matrix(n);
    const DenseMatrix gram = u0.conjugate_transpose() * r * u0;

    // Off the [corner | middle | corner] support the Gram entries vanish for
    // eigenvectors of non-conjugate eigenvalues.
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const bool corner = (i < m1 && j >= n - m1) || (i >= n - m1 && j < m1);
            const bool middle = (i >= m1 && i < n - m1 && j >= m1 && j < n - m1);
            if (!corner && !middle) off = std::max(off, std::abs(gram(i, j)));
        }
    }
    step.gram_pattern_residual = off;

    const DenseMatrix s = gram.block(0, n - m1, m1, m1);
    DenseMatrix q_mid = gram.block(m1, m1, n - 2 * m1, n - 2 * m1);
    q_mid = Complex(0.5, 0.0) * (q_mid + q_mid.conjugate_transpose());
    step.corner_condition = condition_estimate(s);

    DenseMatrix u1 = DenseMatrix::identity(n);
    u1.set_block(0, 0, exchange_matrix(m1));
    u1.set_block(n - m1, n - m1, inverse(s));

    DenseMatrix u2 = DenseMatrix::identity(n);
    u2.set_block(m1, m1, congruence_to_exchange(q_mid, opts.tol));

    step.P = u0 * u1 * u2;
    step.multiplicity = m1;
    return step;
}

std::vector<Complex> eigenvalues_of(const DenseMatrix& a) {
    return schur(a).T.diagonal_entries();
}

}  // namespace

std::pair<DenseMatrix, DenseMatrix> split_self_skew(const DenseMatrix& a) {
    if (!a.is_square()) throw DimensionError("split_self_skew: matrix must be square");
    const DenseMatrix star = per_adjoint(a);
    DenseMatrix s = Complex(0.5, 0.0) * (a + star);
    DenseMatrix k = Complex(0.0, 0.5) * (a - star);
    return {std::move(s), std::move(k)};
}

PeelResult peel_nonreal(const DenseMatrix& a, const ReductionOptions& opts) {
    if (!a.is_square()) throw DimensionError("peel_nonreal: matrix must be square");
    const std::size_t n = a.rows();
    require_per_hermitian(a, opts.tol, "peel_nonreal");
    if (!check_diagonalizable(a).diagonalizable) {
        throw DefectiveError("peel_nonreal: input is numerically defective");
    }

    PeelResult result;
    result.P = DenseMatrix::identity(n);
    DenseMatrix current = a;
    std::size_t peeled = 0;

    while (true) {
        const PeelStep step = peel_step(current, opts);
        if (step.multiplicity == 0) break;
        result.report.add("gram pattern", step.gram_pattern_residual);
        result.report.add("corner block condition", step.corner_condition);

        // Embed the step transform around the already peeled corners.
        const DenseMatrix embedded =
            peeled == 0 ? step.P : perplectic_sum(DenseMatrix::identity(2 * peeled), step.P);
        result.P = result.P * embedded;
        peeled += step.multiplicity;
        result.cluster_sizes.push_back(step.multiplicity);

        const DenseMatrix full = solve(result.P, a * result.P);
        current = full.block(peeled, peeled, n - 2 * peeled, n - 2 * peeled);
    }

    const DenseMatrix full = solve(result.P, a * result.P);
    const std::size_t m = peeled;
    std::vector<Complex> d(m);
    for (std::size_t i = 0; i < m; ++i) d[i] = full(i, i);
    result.D = DenseMatrix::diagonal(d);
    result.core = full.block(m, m, n - 2 * m, n - 2 * m);

    // Off-pattern residual of the peeled shape: diagonal corners + middle.
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const bool corner_diag = (i == j) && (i < m || i >= n - m);
            const bool middle = (i >= m && i < n - m && j >= m && j < n - m);
            if (!corner_diag && !middle) off = std::max(off, std::abs(full(i, j)));
        }
    }
    result.report.pattern_residual = off;
    result.report.transform_structure_residual = perplecticity_residual(result.P);
    result.report.similarity_residual = 0.0;
    double max_core_imag = 0.0;
    for (const Complex v : eigenvalues_of(result.core)) {
        max_core_imag = std::max(max_core_imag, std::abs(v.imag()));
    }
    result.report.add("core spectrum imaginary part", max_core_imag);
    return result;
}

namespace {

// Block-diagonal eigenvector matrix for the leading s x s corner of a peeled
// matrix, one block per cluster size.
DenseMatrix corner_diagonalizer(const DenseMatrix& corner, const std::vector<std::size_t>& sizes,
                                const ReductionOptions& opts) {
    const std::size_t m = corner.rows();
    DenseMatrix q = DenseMatrix::identity(m);
    std::size_t off = 0;
    for (const std::size_t size : sizes) {
        if (size > 1) {
            const EigenDecomposition ed = eig(corner.block(off, off, size, size), opts.cluster_tol);
            q.set_block(off, off, ed.vectors);
        }
        off += size;
    }
    return q;
}

}  // namespace

PairPeelResult peel_nonreal_pair(const DenseMatrix& a, const DenseMatrix& b,
                                 const ReductionOptions& opts) {
    if (!a.is_square() || !b.is_square() || a.rows() != b.rows()) {
        throw DimensionError("peel_nonreal_pair: matrices must be square and same size");
    }
    const std::size_t n = a.rows();
    require_per_hermitian(a, opts.tol, "peel_nonreal_pair");
    require_per_hermitian(b, opts.tol, "peel_nonreal_pair");
    const double commute_scale = norm_scale(a) * norm_scale(b);
    if ((a * b - b * a).frobenius_norm() > opts.tol * commute_scale) {
        throw NotCommutingError("peel_nonreal_pair: inputs do not commute within tolerance");
    }
    if (!check_diagonalizable(b).diagonalizable) {
        throw DefectiveError("peel_nonreal_pair: second input is numerically defective");
    }

    PairPeelResult result;

    // Peel A; B inherits a block structure over A's nonreal corners.
    const PeelResult peel_a = peel_nonreal(a, opts);
    const std::size_t m = peel_a.D.rows();

    DenseMatrix p = peel_a.P;
    DenseMatrix b1 = solve(p, b * p);
    if (m > 0) {
        const DenseMatrix q_small = corner_diagonalizer(b1.block(0, 0, m, m), peel_a.cluster_sizes, opts);
        const DenseMatrix q =
            perplectic_sum(direct_sum(q_small, inverse_adjoint(q_small)), DenseMatrix::identity(n - 2 * m));
        p = p * q;
    }

    // Peel what is left of B in the middle block, fixing A's part the same way.
    const DenseMatrix a2 = solve(p, a * p);
    const DenseMatrix b2 = solve(p, b * p);
    const std::size_t mid = n - 2 * m;
    const PeelResult peel_b = peel_nonreal(b2.block(m, m, mid, mid), opts);
    const std::size_t r = peel_b.D.rows();

    DenseMatrix p_mid = peel_b.P;
    if (r > 0) {
        const DenseMatrix a3 = solve(p_mid, a2.block(m, m, mid, mid) * p_mid);
        const DenseMatrix w_small = corner_diagonalizer(a3.block(0, 0, r, r), peel_b.cluster_sizes, opts);
        const DenseMatrix w =
            perplectic_sum(direct_sum(w_small, inverse_adjoint(w_small)), DenseMatrix::identity(mid - 2 * r));
        p_mid = p_mid * w;
    }
    p = p * perplectic_sum(DenseMatrix::identity(2 * m), p_mid);

    const std::size_t s = m + r;
    const DenseMatrix fa = solve(p, a * p);
    const DenseMatrix fb = solve(p, b * p);

    std::vector<Complex> da(s), db(s);
    for (std::size_t i = 0; i < s; ++i) {
        da[i] = fa(i, i);
        db[i] = fb(i, i);
    }
    result.P = p;
    result.D_A = DenseMatrix::diagonal(da);
    result.D_B = DenseMatrix::diagonal(db);
    result.core_a = fa.block(s, s, n - 2 * s, n - 2 * s);
    result.core_b = fb.block(s, s, n - 2 * s, n - 2 * s);

    auto off_pattern = [&](const DenseMatrix& f) {
        double off = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                const bool corner_diag = (i == j) && (i < s || i >= n - s);
                const bool middle = (i >= s && i < n - s && j >= s && j < n - s);
                if (!corner_diag && !middle) off = std::max(off, std::abs(f(i, j)));
            }
        }
        return off;
    };
    result.report.pattern_residual = std::max(off_pattern(fa), off_pattern(fb));
    result.report.transform_structure_residual = perplecticity_residual(p);
    result.report.add("first peel pattern", peel_a.report.pattern_residual);
    result.report.add("second peel pattern", peel_b.report.pattern_residual);
    return result;
}

XPairResult real_pair_to_x(const DenseMatrix& a, const DenseMatrix& b,
                           const ReductionOptions& opts) {
    if (!a.is_square() || !b.is_square() || a.rows() != b.rows()) {
        throw DimensionError("real_pair_to_x: matrices must be square and same size");
    }
    const std::size_t n = a.rows();
    require_per_hermitian(a, opts.tol, "real_pair_to_x");
    require_per_hermitian(b, opts.tol, "real_pair_to_x");

    const double real_threshold_a = opts.cluster_tol * norm_scale(a);
    const double real_threshold_b = opts.cluster_tol * norm_scale(b);
    for (const Complex v : eigenvalues_of(a)) {
        if (std::abs(v.imag()) > real_threshold_a) {
            throw NonRealSpectrumError("real_pair_to_x: first input has nonreal eigenvalues");
        }
    }
    for (const Complex v : eigenvalues_of(b)) {
        if (std::abs(v.imag()) > real_threshold_b) {
            throw NonRealSpectrumError("real_pair_to_x: second input has nonreal eigenvalues");
        }
    }

    XPairResult result;
    if (n == 0) {
        result.P = DenseMatrix(0, 0);
        result.X_A = result.P;
        result.X_B = result.P;
        return result;
    }

    // NotCommuting / Defective surface from here.
    DenseMatrix t = simultaneous_diagonalize(a, b, opts.tol, opts.cluster_tol);
    std::vector<Complex> avals = solve(t, a * t).diagonal_entries();
    std::vector<Complex> bvals = solve(t, b * t).diagonal_entries();

    // Single-linkage groups of (numerically real) values, ranked by mean.
    auto group_values = [](const std::vector<Complex>& values, double threshold,
                           const std::vector<std::size_t>& members) {
        std::vector<std::size_t> parent(members.size());
        std::iota(parent.begin(), parent.end(), std::size_t{0});
        std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
            while (parent[x] != x) x = parent[x] = parent[parent[x]];
            return x;
        };
        for (std::size_t i = 0; i < members.size(); ++i) {
            for (std::size_t j = i + 1; j < members.size(); ++j) {
                if (std::abs(values[members[i]] - values[members[j]]) <= threshold) {
                    parent[find(i)] = find(j);
                }
            }
        }
        std::vector<std::size_t> roots(members.size());
        for (std::size_t i = 0; i < members.size(); ++i) roots[i] = find(i);
        return roots;
    };

    // Sort columns so eigenvalue groups of A are contiguous with B refining
    // inside each group; then the Gram matrix is block diagonal per
    // (lambda, mu) pair.
    std::vector<std::size_t> all(n);
    std::iota(all.begin(), all.end(), std::size_t{0});
    const std::vector<std::size_t> a_roots = group_values(avals, real_threshold_a, all);

    std::vector<double> a_rank(n), b_rank(n);
    {
        std::vector<std::size_t> unique_roots;
        for (std::size_t root : a_roots) {
            if (std::find(unique_roots.begin(), unique_roots.end(), root) == unique_roots.end()) {
                unique_roots.push_back(root);
            }
        }
        for (std::size_t root : unique_roots) {
            std::vector<std::size_t> members;
            double mean = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                if (a_roots[i] == root) {
                    members.push_back(i);
                    mean += avals[i].real();
                }
            }
            mean /= static_cast<double>(members.size());
            const std::vector<std::size_t> b_roots = group_values(bvals, real_threshold_b, members);
            for (std::size_t k = 0; k < members.size(); ++k) {
                a_rank[members[k]] = mean;
                double b_mean = 0.0;
                std::size_t count = 0;
                for (std::size_t l = 0; l < members.size(); ++l) {
                    if (b_roots[l] == b_roots[k]) {
                        b_mean += bvals[members[l]].real();
                        ++count;
                    }
                }
                b_rank[members[k]] = b_mean / static_cast<double>(count);
            }
        }
    }
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::stable_sort(perm.begin(), perm.end(), [&](std::size_t x, std::size_t y) {
        if (a_rank[x] != a_rank[y]) return a_rank[x] < a_rank[y];
        return b_rank[x] < b_rank[y];
    });
    t = t.selected_columns(perm);

    std::vector<std::size_t> group_sizes;
    {
        std::size_t start = 0;
        for (std::size_t i = 1; i <= n; ++i) {
            const bool boundary = i == n || a_rank[perm[i]] != a_rank[perm[start]] ||
                                  b_rank[perm[i]] != b_rank[perm[start]];
            if (boundary) {
                group_sizes.push_back(i - start);
                start = i;
            }
        }
    }

    const DenseMatrix r = exchange_matrix(n);
    const DenseMatrix gram = t.conjugate_transpose() * r * t;

    double gram_off = 0.0;
    {
        std::size_t off = 0;
        for (const std::size_t size : group_sizes) {
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = off; j < off + size; ++j) {
                    if (i < off || i >= off + size) {
                        gram_off = std::max(gram_off, std::abs(gram(i, j)));
                    }
                }
            }
            off += size;
        }
    }
    result.report.add("gram block pattern", gram_off);

    DenseMatrix q = DenseMatrix::identity(n);
    std::vector<int> signs(n, 0);
    {
        std::size_t off = 0;
        for (const std::size_t size : group_sizes) {
            DenseMatrix block = gram.block(off, off, size, size);
            block = Complex(0.5, 0.0) * (block + block.conjugate_transpose());
            const InertiaCongruence inertia = inertia_congruence(block, HermitianKind::Hermitian, opts.tol);
            q.set_block(off, off, inertia.Q);
            for (std::size_t i = 0; i < inertia.n_plus; ++i) signs[off + i] = +1;
            for (std::size_t i = inertia.n_plus; i < size; ++i) signs[off + i] = -1;
            off += size;
        }
    }

    std::size_t n_plus = 0;
    for (const int s : signs) n_plus += (s > 0);
    if (n_plus != (n + 1) / 2) {
        throw CongruenceError("real_pair_to_x: Gram inertia does not match the anti-identity");
    }

    // Stable permutation gathering the +1 entries first.
    std::vector<std::size_t> plus_first;
    plus_first.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (signs[i] > 0) plus_first.push_back(i);
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (signs[i] < 0) plus_first.push_back(i);
    }
    DenseMatrix w(n, n);
    for (std::size_t j = 0; j < n; ++j) w(plus_first[j], j) = 1.0;

    const DenseMatrix z = diag_to_x_rotation(n);
    result.P = t * q * w * z;
    result.X_A = solve(result.P, a * result.P);
    result.X_B = solve(result.P, b * result.P);

    result.report.transform_structure_residual = perplecticity_residual(result.P);
    const DenseMatrix rx = exchange_matrix(n);
    auto bisym = [&](const DenseMatrix& x) {
        double res = (x - x.transpose()).max_abs();
        res = std::max(res, (x - rx * x.transpose() * rx).max_abs());
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) res = std::max(res, std::abs(x(i, j).imag()));
        return res;
    };
    result.report.add("bisymmetry A", bisym(result.X_A));
    result.report.add("bisymmetry B", bisym(result.X_B));
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i != j && i + j + 1 != n) {
                off = std::max({off, std::abs(result.X_A(i, j)), std::abs(result.X_B(i, j))});
            }
        }
    }
    result.report.pattern_residual = off;
    return result;
}

XFormResult normal_to_x(const DenseMatrix& a, const ReductionOptions& opts) {
    if (!a.is_square()) throw DimensionError("normal_to_x: matrix must be square");
    const std::size_t n = a.rows();
    const ScalarProduct product = ScalarProduct::perplectic(n);
    const StructureReport structure = classify(a, product, opts.tol);
    if (!structure.normal) {
        throw NotNormalError("normal_to_x: input is not R-normal within tolerance");
    }
    if (!check_diagonalizable(a).diagonalizable) {
        throw DefectiveError("normal_to_x: input is numerically defective");
    }

    const auto [s_part, k_part] = split_self_skew(a);
    const PairPeelResult peeled = peel_nonreal_pair(s_part, k_part, opts);
    const std::size_t s = peeled.D_A.rows();

    const XPairResult rotated = real_pair_to_x(peeled.core_a, peeled.core_b, opts);

    XFormResult result;
    result.P = peeled.P * perplectic_sum(DenseMatrix::identity(2 * s), rotated.P);
    result.X = solve(result.P, a * result.P);
    result.corner = s;

    result.residuals.transform_structure_residual = perplecticity_residual(result.P);
    result.residuals.similarity_residual = (a * result.P - result.P * result.X).frobenius_norm();
    double off = 0.0;
    double corner_anti = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const bool on_x = (i == j) || (i + j + 1 == n);
            if (!on_x) off = std::max(off, std::abs(result.X(i, j)));
            if (i + j + 1 == n && i != j && (i < s || i >= n - s)) {
                corner_anti = std::max(corner_anti, std::abs(result.X(i, j)));
            }
        }
    }
    result.residuals.pattern_residual = off;
    result.residuals.add("corner anti-diagonal", corner_anti);
    result.residuals.add("pair peel pattern", peeled.report.pattern_residual);
    result.residuals.add("x rotation pattern", rotated.report.pattern_residual);
    return result;
}

}  // namespace canonform
