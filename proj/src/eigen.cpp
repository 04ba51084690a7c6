#include "canonform/eigen.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <utility>

#include "canonform/errors.hpp"

namespace canonform {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

struct Givens {
    double c = 1.0;
    Complex s = 0.0;
};

// G = [[c, conj(s)], [-s, c]] with G [a; b] = [r; 0].
Givens make_givens(Complex a, Complex b, Complex& r) {
    Givens g;
    const double abs_a = std::abs(a);
    const double abs_b = std::abs(b);
    if (abs_b == 0.0) {
        r = a;
        return g;
    }
    if (abs_a == 0.0) {
        g.c = 0.0;
        g.s = 1.0;
        r = b;
        return g;
    }
    const double t = std::hypot(abs_a, abs_b);
    g.c = abs_a / t;
    g.s = (abs_a / a) * (b / t);
    r = (a / abs_a) * t;
    return g;
}

// Rows i, i+1 <- G * rows, over columns [col0, col1).
void apply_givens_left(DenseMatrix& m, std::size_t i, const Givens& g, std::size_t col0,
                       std::size_t col1) {
    for (std::size_t j = col0; j < col1; ++j) {
        const Complex top = m(i, j);
        const Complex bot = m(i + 1, j);
        m(i, j) = g.c * top + std::conj(g.s) * bot;
        m(i + 1, j) = -g.s * top + g.c * bot;
    }
}

// Columns i, i+1 <- columns * G^H, over rows [row0, row1).
void apply_givens_right(DenseMatrix& m, std::size_t i, const Givens& g, std::size_t row0,
                        std::size_t row1) {
    for (std::size_t r = row0; r < row1; ++r) {
        const Complex left = m(r, i);
        const Complex right = m(r, i + 1);
        m(r, i) = g.c * left + g.s * right;
        m(r, i + 1) = -std::conj(g.s) * left + g.c * right;
    }
}

void hessenberg_reduce(DenseMatrix& h, DenseMatrix& q) {
    const std::size_t n = h.rows();
    if (n < 3) return;
    std::vector<Complex> v(n);
    for (std::size_t k = 0; k + 2 < n; ++k) {
        double tail = 0.0;
        for (std::size_t i = k + 2; i < n; ++i) tail += std::norm(h(i, k));
        if (tail == 0.0) continue;

        const Complex x0 = h(k + 1, k);
        const double norm_x = std::sqrt(std::norm(x0) + tail);
        const Complex alpha = (std::abs(x0) == 0.0) ? Complex(-norm_x, 0.0)
                                                    : -(x0 / std::abs(x0)) * norm_x;
        double vnorm2 = 0.0;
        v[k + 1] = x0 - alpha;
        vnorm2 += std::norm(v[k + 1]);
        for (std::size_t i = k + 2; i < n; ++i) {
            v[i] = h(i, k);
            vnorm2 += std::norm(v[i]);
        }
        if (vnorm2 == 0.0) continue;
        const double inv_vnorm = 1.0 / std::sqrt(vnorm2);
        for (std::size_t i = k + 1; i < n; ++i) v[i] *= inv_vnorm;

        // H <- (I - 2vv^H) H, rows k+1..n-1.
        for (std::size_t j = k; j < n; ++j) {
            Complex dot = 0.0;
            for (std::size_t i = k + 1; i < n; ++i) dot += std::conj(v[i]) * h(i, j);
            dot *= 2.0;
            for (std::size_t i = k + 1; i < n; ++i) h(i, j) -= dot * v[i];
        }
        // H <- H (I - 2vv^H), columns k+1..n-1.
        for (std::size_t i = 0; i < n; ++i) {
            Complex dot = 0.0;
            for (std::size_t j = k + 1; j < n; ++j) dot += h(i, j) * v[j];
            dot *= 2.0;
            for (std::size_t j = k + 1; j < n; ++j) h(i, j) -= dot * std::conj(v[j]);
        }
        // Q <- Q (I - 2vv^H).
        for (std::size_t i = 0; i < n; ++i) {
            Complex dot = 0.0;
            for (std::size_t j = k + 1; j < n; ++j) dot += q(i, j) * v[j];
            dot *= 2.0;
            for (std::size_t j = k + 1; j < n; ++j) q(i, j) -= dot * std::conj(v[j]);
        }
        h(k + 1, k) = alpha;
        for (std::size_t i = k + 2; i < n; ++i) h(i, k) = 0.0;
    }
}

// Eigenvalue of [[a, b], [c, d]] closest to d.
Complex wilkinson_shift(Complex a, Complex b, Complex c, Complex d) {
    const Complex mid = 0.5 * (a + d);
    const Complex delta = std::sqrt(0.25 * (a - d) * (a - d) + b * c);
    const Complex l1 = mid + delta;
    const Complex l2 = mid - delta;
    return (std::abs(l1 - d) < std::abs(l2 - d)) ? l1 : l2;
}

}  // namespace

SchurDecomposition schur(const DenseMatrix& a, std::size_t max_iterations) {
    if (!a.is_square()) throw DimensionError("schur: matrix must be square");
    const std::size_t n = a.rows();
    SchurDecomposition result;
    result.T = a;
    result.Q = DenseMatrix::identity(n);
    if (n <= 1) return result;

    DenseMatrix& h = result.T;
    DenseMatrix& q = result.Q;
    hessenberg_reduce(h, q);

    const std::size_t iter_cap = std::max<std::size_t>(max_iterations, 30 * n);
    const double norm_scale = std::max(h.frobenius_norm(), kEps);

    auto subdiag_negligible = [&](std::size_t i) {
        double tst = std::abs(h(i, i)) + std::abs(h(i + 1, i + 1));
        if (tst == 0.0) tst = norm_scale;
        return std::abs(h(i + 1, i)) <= kEps * tst;
    };

    std::size_t hi = n - 1;
    std::size_t iterations = 0;
    std::size_t stall = 0;
    while (true) {
        // Deflate converged trailing part.
        while (hi > 0 && subdiag_negligible(hi - 1)) {
            h(hi, hi - 1) = 0.0;
            --hi;
            stall = 0;
        }
        if (hi == 0) break;

        std::size_t lo = hi;
        while (lo > 0 && !subdiag_negligible(lo - 1)) --lo;
        if (lo > 0) h(lo, lo - 1) = 0.0;

        if (++iterations > iter_cap) {
            throw NonConvergenceError("schur: QR iteration did not converge", iter_cap);
        }
        ++stall;

        Complex shift = wilkinson_shift(h(hi - 1, hi - 1), h(hi - 1, hi), h(hi, hi - 1), h(hi, hi));
        if (stall % 10 == 0) {
            // Exceptional shift to break symmetric stalls.
            const double kick = std::abs(h(hi, hi - 1)) + (hi >= 2 ? std::abs(h(hi - 1, hi - 2)) : 0.0);
            shift = h(hi, hi) + Complex(1.5 * kick, 0.5 * kick + kEps * norm_scale);
        }

        for (std::size_t i = lo; i <= hi; ++i) h(i, i) -= shift;

        std::vector<Givens> rotations(hi - lo);
        for (std::size_t i = lo; i < hi; ++i) {
            Complex r;
            const Givens g = make_givens(h(i, i), h(i + 1, i), r);
            rotations[i - lo] = g;
            apply_givens_left(h, i, g, i, n);
            h(i, i) = r;
            h(i + 1, i) = 0.0;
        }
        for (std::size_t i = lo; i < hi; ++i) {
            const Givens& g = rotations[i - lo];
            apply_givens_right(h, i, g, 0, std::min(i + 2, n));
            apply_givens_right(q, i, g, 0, n);
        }
        for (std::size_t i = lo; i <= hi; ++i) h(i, i) += shift;
    }

    for (std::size_t i = 1; i < n; ++i) {
        for (std::size_t j = 0; j < i; ++j) h(i, j) = 0.0;
    }
    result.iterations = iterations;
    return result;
}

namespace {

std::vector<std::size_t> single_linkage_labels(const std::vector<Complex>& values, double threshold) {
    const std::size_t n = values.size();
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (std::abs(values[i] - values[j]) <= threshold) {
                parent[find(i)] = find(j);
            }
        }
    }
    std::vector<std::size_t> labels(n);
    for (std::size_t i = 0; i < n; ++i) labels[i] = find(i);
    return labels;
}

// Unitary similarity swapping the adjacent diagonal entries i, i+1 of T.
void swap_adjacent(DenseMatrix& t, DenseMatrix& q, std::size_t i) {
    const std::size_t n = t.rows();
    const Complex a = t(i, i);
    const Complex b = t(i, i + 1);
    const Complex d = t(i + 1, i + 1);
    // First column of the rotation is a unit eigenvector of [[a,b],[0,d]]
    // for d; [b, d - a] spans it.
    const double scale = std::hypot(std::abs(b), std::abs(d - a));
    if (scale == 0.0) return;  // already a multiple of the identity
    const Complex u0 = b / scale;
    const Complex u1 = (d - a) / scale;
    // G = [[u0, -conj(u1)], [u1, conj(u0)]]; apply T <- G^H T G, Q <- Q G.
    for (std::size_t j = 0; j < n; ++j) {
        const Complex top = t(i, j);
        const Complex bot = t(i + 1, j);
        t(i, j) = std::conj(u0) * top + std::conj(u1) * bot;
        t(i + 1, j) = -u1 * top + u0 * bot;
    }
    for (std::size_t r = 0; r < n; ++r) {
        const Complex left = t(r, i);
        const Complex right = t(r, i + 1);
        t(r, i) = left * u0 + right * u1;
        t(r, i + 1) = -left * std::conj(u1) + right * std::conj(u0);
    }
    for (std::size_t r = 0; r < n; ++r) {
        const Complex left = q(r, i);
        const Complex right = q(r, i + 1);
        q(r, i) = left * u0 + right * u1;
        q(r, i + 1) = -left * std::conj(u1) + right * std::conj(u0);
    }
    t(i + 1, i) = 0.0;
}

}  // namespace

EigenDecomposition eig(const DenseMatrix& a, double cluster_tol) {
    if (!a.is_square()) throw DimensionError("eig: matrix must be square");
    const std::size_t n = a.rows();
    SchurDecomposition sch = schur(a);
    DenseMatrix& t = sch.T;
    DenseMatrix& q = sch.Q;

    const double threshold = cluster_tol * std::max(1.0, a.frobenius_norm());
    std::vector<Complex> diag = t.diagonal_entries();
    std::vector<std::size_t> labels = single_linkage_labels(diag, threshold);

    // Cluster ordering: (Im of mean desc, Re of mean asc).
    std::vector<std::size_t> unique_labels;
    for (std::size_t lab : labels) {
        if (std::find(unique_labels.begin(), unique_labels.end(), lab) == unique_labels.end()) {
            unique_labels.push_back(lab);
        }
    }
    std::vector<Complex> means(unique_labels.size());
    for (std::size_t u = 0; u < unique_labels.size(); ++u) {
        Complex sum = 0.0;
        std::size_t count = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (labels[i] == unique_labels[u]) {
                sum += diag[i];
                ++count;
            }
        }
        means[u] = sum / static_cast<double>(count);
    }
    std::vector<std::size_t> order(unique_labels.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        if (means[x].imag() != means[y].imag()) return means[x].imag() > means[y].imag();
        return means[x].real() < means[y].real();
    });

    // Bring cluster members adjacent, clusters in target order, by bubbling
    // with unitary adjacent swaps.
    std::size_t position = 0;
    for (std::size_t u : order) {
        const std::size_t target_label = unique_labels[u];
        std::size_t remaining = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (labels[i] == target_label) ++remaining;
        }
        for (std::size_t k = 0; k < remaining; ++k) {
            std::size_t src = position;
            while (src < n && labels[src] != target_label) ++src;
            for (std::size_t i = src; i > position; --i) {
                swap_adjacent(t, q, i - 1);
                std::swap(labels[i - 1], labels[i]);
            }
            ++position;
        }
    }

    diag = t.diagonal_entries();
    EigenDecomposition out;
    out.values = diag;

    std::size_t start = 0;
    while (start < n) {
        std::size_t end = start + 1;
        while (end < n && labels[end] == labels[start]) ++end;
        EigenCluster cluster;
        Complex sum = 0.0;
        for (std::size_t i = start; i < end; ++i) {
            cluster.column_indices.push_back(i);
            sum += diag[i];
        }
        cluster.multiplicity = end - start;
        cluster.value = sum / static_cast<double>(cluster.multiplicity);
        out.clusters.push_back(std::move(cluster));
        start = end;
    }

    // Eigenvectors by guarded back-substitution on (T - lambda I), lifted by Q.
    out.vectors = DenseMatrix(n, n);
    const double floor = 2.0 * kEps * std::max(1.0, t.frobenius_norm());
    std::vector<Complex> y(n);
    for (std::size_t j = 0; j < n; ++j) {
        std::fill(y.begin(), y.end(), Complex(0.0, 0.0));
        y[j] = 1.0;
        const Complex lambda = t(j, j);
        for (std::size_t ii = j; ii-- > 0;) {
            Complex s = 0.0;
            for (std::size_t k = ii + 1; k <= j; ++k) s += t(ii, k) * y[k];
            Complex den = t(ii, ii) - lambda;
            if (std::abs(den) < floor) den = Complex(floor, 0.0);
            y[ii] = -s / den;
        }
        double norm2 = 0.0;
        for (std::size_t i = 0; i <= j; ++i) norm2 += std::norm(y[i]);
        const double inv_norm = 1.0 / std::sqrt(norm2);
        for (std::size_t i = 0; i < n; ++i) {
            Complex v = 0.0;
            for (std::size_t k = 0; k <= j; ++k) v += q(i, k) * y[k];
            out.vectors(i, j) = v * inv_norm;
        }
    }
    return out;
}

std::size_t column_rank(const DenseMatrix& columns, double drop_tol) {
    const std::size_t rows = columns.rows();
    const std::size_t cols = columns.cols();
    if (rows == 0 || cols == 0) return 0;
    DenseMatrix w = columns;
    std::vector<bool> used(cols, false);
    std::size_t rank = 0;
    double first_pivot = 0.0;
    for (std::size_t step = 0; step < cols; ++step) {
        std::size_t best = cols;
        double best_norm = 0.0;
        for (std::size_t j = 0; j < cols; ++j) {
            if (used[j]) continue;
            double nrm = 0.0;
            for (std::size_t i = 0; i < rows; ++i) nrm += std::norm(w(i, j));
            nrm = std::sqrt(nrm);
            if (nrm > best_norm) {
                best_norm = nrm;
                best = j;
            }
        }
        if (best == cols) break;
        if (step == 0) first_pivot = best_norm;
        if (best_norm <= drop_tol * std::max(first_pivot, kEps)) break;
        used[best] = true;
        ++rank;
        // Orthogonalize the remaining columns against the pivot.
        const double inv = 1.0 / best_norm;
        std::vector<Complex> pivot(rows);
        for (std::size_t i = 0; i < rows; ++i) pivot[i] = w(i, best) * inv;
        for (std::size_t j = 0; j < cols; ++j) {
            if (used[j]) continue;
            Complex dot = 0.0;
            for (std::size_t i = 0; i < rows; ++i) dot += std::conj(pivot[i]) * w(i, j);
            for (std::size_t i = 0; i < rows; ++i) w(i, j) -= dot * pivot[i];
        }
    }
    return rank;
}

DiagonalizabilityReport check_diagonalizable(const DenseMatrix& a, double cond_cap) {
    DiagonalizabilityReport report;
    const EigenDecomposition ed = eig(a);
    report.condition_estimate = condition_estimate(ed.vectors);
    if (!(report.condition_estimate <= cond_cap)) {
        report.diagonalizable = false;
        return report;
    }
    for (const EigenCluster& cluster : ed.clusters) {
        if (cluster.multiplicity <= 1) continue;
        const DenseMatrix block = ed.vectors.selected_columns(cluster.column_indices);
        if (column_rank(block) < cluster.multiplicity) {
            report.diagonalizable = false;
            return report;
        }
    }
    report.diagonalizable = true;
    return report;
}

DenseMatrix simultaneous_diagonalize(const DenseMatrix& a, const DenseMatrix& b, double tol,
                                     double cluster_tol) {
    if (!a.is_square() || !b.is_square() || a.rows() != b.rows()) {
        throw DimensionError("simultaneous_diagonalize: matrices must be square and same size");
    }
    const std::size_t n = a.rows();
    const double commute_scale = std::max(1.0, a.frobenius_norm()) * std::max(1.0, b.frobenius_norm());
    if ((a * b - b * a).frobenius_norm() > tol * commute_scale) {
        throw NotCommutingError("simultaneous_diagonalize: matrices do not commute within tolerance");
    }
    if (!check_diagonalizable(a).diagonalizable || !check_diagonalizable(b).diagonalizable) {
        throw DefectiveError("simultaneous_diagonalize: inputs must be diagonalizable");
    }

    const EigenDecomposition ed = eig(a, cluster_tol);
    const DenseMatrix m = solve(ed.vectors, b * ed.vectors);

    DenseMatrix w = DenseMatrix::identity(n);
    for (const EigenCluster& cluster : ed.clusters) {
        if (cluster.multiplicity <= 1) continue;
        const std::size_t off = cluster.column_indices.front();
        const std::size_t size = cluster.multiplicity;
        const EigenDecomposition sub = eig(m.block(off, off, size, size), cluster_tol);
        w.set_block(off, off, sub.vectors);
    }
    DenseMatrix t = ed.vectors * w;

    auto offdiag_norm = [](const DenseMatrix& d) {
        double sum = 0.0;
        for (std::size_t i = 0; i < d.rows(); ++i)
            for (std::size_t j = 0; j < d.cols(); ++j)
                if (i != j) sum += std::norm(d(i, j));
        return std::sqrt(sum);
    };
    const DenseMatrix da = solve(t, a * t);
    const DenseMatrix db = solve(t, b * t);
    if (offdiag_norm(da) > tol * std::max(1.0, a.frobenius_norm()) * 100.0 ||
        offdiag_norm(db) > tol * std::max(1.0, b.frobenius_norm()) * 100.0) {
        throw DefectiveError("simultaneous_diagonalize: inputs could not be jointly diagonalized");
    }
    return t;
}

InertiaCongruence inertia_congruence(const DenseMatrix& a, HermitianKind kind, double tol) {
    if (!a.is_square()) throw DimensionError("inertia_congruence: matrix must be square");
    const std::size_t n = a.rows();
    const double scale = std::max(1.0, a.frobenius_norm());

    const DenseMatrix ah = a.conjugate_transpose();
    if (kind == HermitianKind::Hermitian) {
        if ((a - ah).frobenius_norm() > tol * scale * 10.0) {
            throw NotHermitianError("inertia_congruence: matrix is not Hermitian within tolerance");
        }
    } else {
        if ((a + ah).frobenius_norm() > tol * scale * 10.0) {
            throw NotHermitianError("inertia_congruence: matrix is not skew-Hermitian within tolerance");
        }
    }

    // -iA is Hermitian for skew-Hermitian A, with positive eigenvalues exactly
    // where A has positive imaginary ones.
    DenseMatrix h = (kind == HermitianKind::Hermitian) ? a : Complex(0.0, -1.0) * a;
    h = Complex(0.5, 0.0) * (h + h.conjugate_transpose());

    const SchurDecomposition sch = schur(h);
    std::vector<std::size_t> positive, negative;
    for (std::size_t i = 0; i < n; ++i) {
        const double lambda = sch.T(i, i).real();
        if (std::abs(lambda) <= tol * scale) {
            throw SingularError("inertia_congruence: matrix is numerically singular");
        }
        (lambda > 0.0 ? positive : negative).push_back(i);
    }

    InertiaCongruence out;
    out.n_plus = positive.size();
    out.n_minus = negative.size();
    out.Q = DenseMatrix(n, n);
    std::size_t col = 0;
    for (std::size_t idx : positive) {
        const double s = 1.0 / std::sqrt(sch.T(idx, idx).real());
        for (std::size_t i = 0; i < n; ++i) out.Q(i, col) = sch.Q(i, idx) * s;
        ++col;
    }
    for (std::size_t idx : negative) {
        const double s = 1.0 / std::sqrt(-sch.T(idx, idx).real());
        for (std::size_t i = 0; i < n; ++i) out.Q(i, col) = sch.Q(i, idx) * s;
        ++col;
    }
    return out;
}

DenseMatrix matrix_exp(const DenseMatrix& k) {
    if (!k.is_square()) throw DimensionError("matrix_exp: matrix must be square");
    const std::size_t n = k.rows();
    const double norm = k.frobenius_norm();
    if (!k.all_finite() || norm > 700.0) {
        throw OverflowError("matrix_exp: input norm too large");
    }
    int squarings = 0;
    double scaled = norm;
    while (scaled > 0.5) {
        scaled *= 0.5;
        ++squarings;
    }
    DenseMatrix b = std::pow(0.5, squarings) * k;

    DenseMatrix sum = DenseMatrix::identity(n);
    DenseMatrix term = DenseMatrix::identity(n);
    for (int i = 1; i <= 40; ++i) {
        term = term * b;
        term *= Complex(1.0 / i, 0.0);
        sum += term;
        if (term.frobenius_norm() <= kEps * sum.frobenius_norm()) break;
    }
    for (int i = 0; i < squarings; ++i) sum = sum * sum;
    if (!sum.all_finite()) throw OverflowError("matrix_exp: overflow during squaring");
    return sum;
}

}  // namespace canonform
