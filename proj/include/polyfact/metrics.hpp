// Recovery scoring: permutation/sign resolved signal-to-interference ratio
// and mixing-matrix alignment diagnostics.
#ifndef POLYFACT_METRICS_HPP
#define POLYFACT_METRICS_HPP

#include <limits>
#include <vector>

#include "polyfact/types.hpp"

namespace polyfact {

namespace detail {

// O(n^3) Hungarian algorithm (Jonker/Volgenant potentials) for square cost
// matrices; returns row -> column assignment minimizing total cost.
inline std::vector<int> hungarian_min(const Matrix& cost) {
    const int n = static_cast<int>(cost.rows());
    std::vector<double> u(static_cast<size_t>(n) + 1), v(static_cast<size_t>(n) + 1);
    std::vector<int> p(static_cast<size_t>(n) + 1), way(static_cast<size_t>(n) + 1);
    const double inf = std::numeric_limits<double>::infinity();
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<double> minv(static_cast<size_t>(n) + 1, inf);
        std::vector<bool> used(static_cast<size_t>(n) + 1, false);
        do {
            used[static_cast<size_t>(j0)] = true;
            int i0 = p[static_cast<size_t>(j0)], j1 = -1;
            double delta = inf;
            for (int j = 1; j <= n; ++j) {
                if (used[static_cast<size_t>(j)]) continue;
                double cur = cost(i0 - 1, j - 1) - u[static_cast<size_t>(i0)] - v[static_cast<size_t>(j)];
                if (cur < minv[static_cast<size_t>(j)]) {
                    minv[static_cast<size_t>(j)] = cur;
                    way[static_cast<size_t>(j)] = j0;
                }
                if (minv[static_cast<size_t>(j)] < delta) {
                    delta = minv[static_cast<size_t>(j)];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[static_cast<size_t>(j)]) {
                    u[static_cast<size_t>(p[static_cast<size_t>(j)])] += delta;
                    v[static_cast<size_t>(j)] -= delta;
                } else {
                    minv[static_cast<size_t>(j)] -= delta;
                }
            }
            j0 = j1;
        } while (p[static_cast<size_t>(j0)] != 0);
        do {
            int j1 = way[static_cast<size_t>(j0)];
            p[static_cast<size_t>(j0)] = p[static_cast<size_t>(j1)];
            j0 = j1;
        } while (j0);
    }
    std::vector<int> assign(static_cast<size_t>(n));
    for (int j = 1; j <= n; ++j)
        if (p[static_cast<size_t>(j)] > 0) assign[static_cast<size_t>(p[static_cast<size_t>(j)]) - 1] = j - 1;
    return assign;
}

// row -> column assignment maximizing the summed scores
inline std::vector<int> assign_max(const Matrix& score) {
    return hungarian_min(-score);
}

}  // namespace detail

inline constexpr double kSirCapDb = 300.0;

struct SirScore {
    std::vector<double> per_source_db;
    double mean_db = 0.0;
    std::vector<int> permutation;  // estimated row i corresponds to true row permutation[i]
    std::vector<int> signs;        // +-1 per estimated row
};

// SIR on the latent-space transform G = S_est * pinv(S_g): after resolving
// the permutation by maximum |G| assignment, the diagonal entry is signal and
// the rest of the row is interference.
inline SirScore sir(const Matrix& S_est, const Matrix& S_g) {
    if (S_est.rows() != S_g.rows() || S_est.cols() != S_g.cols())
        throw PolyfactError("sir: shape mismatch");
    const Index r = S_g.rows();
    Matrix gram = S_g * S_g.transpose();
    Eigen::FullPivLU<Matrix> lu(gram);
    if (!lu.isInvertible()) throw PolyfactError("sir: reference factor is rank deficient");
    Matrix G = S_est * S_g.transpose() * lu.inverse();

    SirScore out;
    out.permutation = detail::assign_max(G.cwiseAbs());
    for (Index i = 0; i < r; ++i) {
        int pi = out.permutation[static_cast<size_t>(i)];
        double sig = G(i, pi) * G(i, pi);
        double interf = G.row(i).squaredNorm() - sig;
        interf = std::max(interf, 1e-30);
        double db = 10.0 * std::log10(sig / interf);
        db = std::min(db, kSirCapDb);
        out.per_source_db.push_back(db);
        out.signs.push_back(G(i, pi) >= 0 ? 1 : -1);
        out.mean_db += db;
    }
    out.mean_db /= static_cast<double>(r);
    return out;
}

struct FactorMatch {
    std::vector<int> permutation;  // estimated column i matches true column permutation[i]
    std::vector<double> scales;
    double residual = 0.0;  // relative Frobenius error after alignment
};

// Column matching by maximal |cosine| assignment, with per-column scale from
// the projection ratio.
inline FactorMatch match_factors(const Matrix& H_est, const Matrix& H_g) {
    if (H_est.rows() != H_g.rows() || H_est.cols() != H_g.cols())
        throw PolyfactError("match_factors: shape mismatch");
    const Index r = H_g.cols();
    Matrix cosabs(r, r);
    for (Index i = 0; i < r; ++i)
        for (Index j = 0; j < r; ++j) {
            double den = H_est.col(i).norm() * H_g.col(j).norm();
            if (den < 1e-14) throw PolyfactError("match_factors: rank-deficient input");
            cosabs(i, j) = std::abs(H_est.col(i).dot(H_g.col(j))) / den;
        }
    FactorMatch out;
    out.permutation = detail::assign_max(cosabs);
    Matrix aligned(H_est.rows(), r);
    for (Index i = 0; i < r; ++i) {
        int pi = out.permutation[static_cast<size_t>(i)];
        double scale = H_est.col(i).dot(H_g.col(pi)) / H_g.col(pi).squaredNorm();
        out.scales.push_back(scale);
        aligned.col(i) = scale * H_g.col(pi);
    }
    out.residual = (H_est - aligned).norm() / std::max(H_est.norm(), 1e-30);
    return out;
}

} // namespace polyfact

#endif
