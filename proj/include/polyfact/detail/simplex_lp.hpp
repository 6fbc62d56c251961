// Small dense two-phase simplex solver for the tiny LPs that show up in
// polytope handling (support values, hull membership, Chebyshev centers).
// Problem sizes here are a few dozen rows/columns, so a plain tableau with
// Bland's rule is plenty.
#ifndef POLYFACT_DETAIL_SIMPLEX_LP_HPP
#define POLYFACT_DETAIL_SIMPLEX_LP_HPP

#include <limits>
#include <vector>

#include "polyfact/types.hpp"

namespace polyfact::detail {

enum class LpStatus { Optimal, Unbounded, Infeasible };

struct LpResult {
    LpStatus status = LpStatus::Infeasible;
    double value = 0.0;
    Vector x;
};

class SimplexTableau {
public:
    // min c'x  s.t.  Ax = b, x >= 0.
    static LpResult solve(const Matrix& A, const Vector& b, const Vector& c,
                          double eps = 1e-9) {
        const Index m = A.rows(), n = A.cols();
        Matrix Aw = A;
        Vector bw = b;
        for (Index i = 0; i < m; ++i) {
            if (bw(i) < 0) {
                Aw.row(i) *= -1.0;
                bw(i) *= -1.0;
            }
        }

        // Phase 1 tableau: columns [x | artificials], objective = sum of artificials.
        Matrix T(m + 1, n + m + 1);
        T.setZero();
        T.block(0, 0, m, n) = Aw;
        T.block(0, n, m, m) = Matrix::Identity(m, m);
        T.col(n + m).head(m) = bw;
        std::vector<Index> basis(m);
        for (Index i = 0; i < m; ++i) basis[i] = n + i;
        // reduced costs for phase-1 objective
        for (Index j = 0; j < n; ++j) T(m, j) = -Aw.col(j).sum();
        T(m, n + m) = -bw.sum();

        if (!run(T, basis, n + m, eps)) return {LpStatus::Infeasible, 0.0, {}};
        if (-T(m, n + m) > 1e-7 * (1.0 + bw.lpNorm<Eigen::Infinity>()))
            return {LpStatus::Infeasible, 0.0, {}};

        // Drive artificials out of the basis where possible; rows where this
        // fails are redundant and get neutralized.
        for (Index i = 0; i < m; ++i) {
            if (basis[i] >= n) {
                Index piv = -1;
                for (Index j = 0; j < n; ++j) {
                    if (std::abs(T(i, j)) > 1e-7) { piv = j; break; }
                }
                if (piv >= 0) pivot(T, basis, i, piv);
                else T.row(i).setZero();
            }
        }

        // Phase 2: replace objective row, zero out artificial columns.
        for (Index j = 0; j < n; ++j) T(m, j) = c(j);
        for (Index j = n; j < n + m; ++j) T(m, j) = 0.0;
        T(m, n + m) = 0.0;
        for (Index i = 0; i < m; ++i) {
            if (basis[i] < n && std::abs(T(m, basis[i])) > 0)
                T.row(m) -= T(m, basis[i]) * T.row(i);
        }
        // forbid artificials from re-entering
        for (Index j = n; j < n + m; ++j)
            for (Index i = 0; i <= m; ++i) T(i, j) = (i < m && basis[i] == j) ? T(i, j) : 0.0;

        if (!run(T, basis, n, eps)) return {LpStatus::Unbounded, 0.0, {}};

        Vector x = Vector::Zero(n);
        for (Index i = 0; i < m; ++i)
            if (basis[i] < n) x(basis[i]) = T(i, n + m);
        return {LpStatus::Optimal, c.dot(x), x};
    }

private:
    // Bland's rule; returns false on unboundedness. Columns past `ncols`
    // never enter.
    static bool run(Matrix& T, std::vector<Index>& basis, Index ncols, double eps) {
        const Index m = T.rows() - 1;
        const Index rhs = T.cols() - 1;
        const int max_iter = 20000;
        for (int it = 0; it < max_iter; ++it) {
            Index enter = -1;
            for (Index j = 0; j < ncols; ++j) {
                if (T(m, j) < -eps) { enter = j; break; }
            }
            if (enter < 0) return true;
            Index leave = -1;
            double best = std::numeric_limits<double>::infinity();
            for (Index i = 0; i < m; ++i) {
                if (T(i, enter) > eps) {
                    double ratio = T(i, rhs) / T(i, enter);
                    if (ratio < best - eps ||
                        (ratio < best + eps && (leave < 0 || basis[i] < basis[leave]))) {
                        best = ratio;
                        leave = i;
                    }
                }
            }
            if (leave < 0) return false;
            pivot(T, basis, leave, enter);
        }
        throw PolyfactError("simplex: iteration limit exceeded");
    }

    static void pivot(Matrix& T, std::vector<Index>& basis, Index row, Index col) {
        T.row(row) /= T(row, col);
        for (Index i = 0; i < T.rows(); ++i) {
            if (i != row && std::abs(T(i, col)) > 0)
                T.row(i) -= T(i, col) * T.row(row);
        }
        basis[row] = col;
    }
};

// max c'x subject to Ax <= b, x free.
inline LpResult lp_max_ineq(const Vector& c, const Matrix& A, const Vector& b) {
    const Index m = A.rows(), n = A.cols();
    // x = u - w with u, w >= 0; slack per row.
    Matrix As(m, 2 * n + m);
    As << A, -A, Matrix::Identity(m, m);
    Vector cs(2 * n + m);
    cs << -c, c, Vector::Zero(m);
    LpResult r = SimplexTableau::solve(As, b, cs);
    if (r.status == LpStatus::Optimal) {
        Vector x = r.x.head(n) - r.x.segment(n, n);
        r.x = x;
        r.value = c.dot(x);
    }
    return r;
}

// Is x inside conv(columns of V)?  Feasibility of V*l = x, 1'l = 1, l >= 0,
// posed with slack tolerance `tol` on the coordinates.
inline bool in_convex_hull(const Matrix& V, const Vector& x, double tol = 1e-8) {
    const Index r = V.rows(), m = V.cols();
    // Solve min sum(p + q) s.t. V l + p - q = x, 1'l = 1, l,p,q >= 0.
    Matrix A(r + 1, m + 2 * r);
    A.setZero();
    A.block(0, 0, r, m) = V;
    A.block(0, m, r, r) = Matrix::Identity(r, r);
    A.block(0, m + r, r, r) = -Matrix::Identity(r, r);
    A.row(r).head(m).setOnes();
    Vector b(r + 1);
    b << x, 1.0;
    Vector c = Vector::Zero(m + 2 * r);
    c.tail(2 * r).setOnes();
    LpResult res = SimplexTableau::solve(A, b, c);
    if (res.status != LpStatus::Optimal) return false;
    double scale = 1.0 + x.lpNorm<Eigen::Infinity>() + V.lpNorm<Eigen::Infinity>();
    return res.value <= tol * scale;
}

// Indices of columns of V that are extreme points of conv(V).
inline std::vector<int> extreme_point_indices(const Matrix& V, double tol = 1e-8) {
    std::vector<int> out;
    const Index m = V.cols();
    if (m == 1) return {0};
    Matrix rest(V.rows(), m - 1);
    for (Index j = 0; j < m; ++j) {
        Index k = 0;
        for (Index i = 0; i < m; ++i)
            if (i != j) rest.col(k++) = V.col(i);
        if (!in_convex_hull(rest, V.col(j), tol)) out.push_back(static_cast<int>(j));
    }
    return out;
}

struct ChebyshevResult {
    Vector center;
    double radius = 0.0;
};

// Largest ball inside {x | Ax <= b}; used to seed the ellipsoid solver.
inline ChebyshevResult chebyshev_center(const Matrix& A, const Vector& b) {
    const Index m = A.rows(), n = A.cols();
    Matrix Ac(m, n + 1);
    Vector c = Vector::Zero(n + 1);
    c(n) = 1.0;
    for (Index i = 0; i < m; ++i) {
        Ac.row(i).head(n) = A.row(i);
        Ac(i, n) = A.row(i).norm();
    }
    LpResult r = lp_max_ineq(c, Ac, b);
    if (r.status != LpStatus::Optimal || r.x(n) <= 0)
        throw PolyfactError("chebyshev_center: polytope is empty or degenerate");
    return {r.x.head(n), r.x(n)};
}

// Bounded iff every coordinate direction has finite support value.
inline bool is_bounded_polyhedron(const Matrix& A, const Vector& b) {
    const Index n = A.cols();
    for (Index k = 0; k < n; ++k) {
        for (double sgn : {1.0, -1.0}) {
            Vector c = Vector::Zero(n);
            c(k) = sgn;
            if (lp_max_ineq(c, A, b).status != LpStatus::Optimal) return false;
        }
    }
    return true;
}

} // namespace polyfact::detail

#endif
