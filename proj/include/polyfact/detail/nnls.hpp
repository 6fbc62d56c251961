// Lawson-Hanson style active-set nonnegative least squares, for the small
// certificate fits used by the ellipsoid optimality check.
#ifndef POLYFACT_DETAIL_NNLS_HPP
#define POLYFACT_DETAIL_NNLS_HPP

#include <vector>

#include "polyfact/types.hpp"

namespace polyfact::detail {

// min ||A x - b||_2  s.t.  x >= 0.
inline Vector nnls(const Matrix& A, const Vector& b, int max_iter = 500) {
    const Index n = A.cols();
    Vector x = Vector::Zero(n);
    std::vector<bool> passive(static_cast<size_t>(n), false);
    Vector w = A.transpose() * (b - A * x);
    const double tol = 1e-12 * (1.0 + b.norm());

    for (int iter = 0; iter < max_iter; ++iter) {
        Index best = -1;
        double wmax = tol;
        for (Index j = 0; j < n; ++j) {
            if (!passive[static_cast<size_t>(j)] && w(j) > wmax) {
                wmax = w(j);
                best = j;
            }
        }
        if (best < 0) break;
        passive[static_cast<size_t>(best)] = true;

        for (int inner = 0; inner < max_iter; ++inner) {
            std::vector<Index> P;
            for (Index j = 0; j < n; ++j)
                if (passive[static_cast<size_t>(j)]) P.push_back(j);
            Matrix Ap(A.rows(), static_cast<Index>(P.size()));
            for (size_t k = 0; k < P.size(); ++k) Ap.col(static_cast<Index>(k)) = A.col(P[k]);
            Vector z = Ap.colPivHouseholderQr().solve(b);

            bool all_pos = true;
            for (Index k = 0; k < z.size(); ++k)
                if (z(k) <= 0) all_pos = false;
            if (all_pos) {
                x.setZero();
                for (size_t k = 0; k < P.size(); ++k) x(P[k]) = z(static_cast<Index>(k));
                break;
            }
            // step back to the boundary of the nonnegative orthant
            double alpha = 1.0;
            for (size_t k = 0; k < P.size(); ++k) {
                double zk = z(static_cast<Index>(k)), xk = x(P[k]);
                if (zk <= 0) alpha = std::min(alpha, xk / (xk - zk));
            }
            for (size_t k = 0; k < P.size(); ++k) {
                x(P[k]) += alpha * (z(static_cast<Index>(k)) - x(P[k]));
                if (x(P[k]) <= tol) {
                    x(P[k]) = 0.0;
                    passive[static_cast<size_t>(P[k])] = false;
                }
            }
        }
        w = A.transpose() * (b - A * x);
    }
    return x;
}

} // namespace polyfact::detail

#endif
