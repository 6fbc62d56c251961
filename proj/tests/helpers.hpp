#ifndef POLYFACT_TEST_HELPERS_HPP
#define POLYFACT_TEST_HELPERS_HPP

#include <algorithm>
#include <random>

#include "polyfact/types.hpp"

namespace testutil {

inline polyfact::Vector random_vector(polyfact::Index n, std::mt19937_64& rng, double scale = 1.0) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    polyfact::Vector v(n);
    for (polyfact::Index i = 0; i < n; ++i) v(i) = scale * gauss(rng);
    return v;
}

inline polyfact::Matrix random_matrix(polyfact::Index r, polyfact::Index c, std::mt19937_64& rng,
                                      double scale = 1.0) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    polyfact::Matrix M(r, c);
    for (polyfact::Index i = 0; i < r; ++i)
        for (polyfact::Index j = 0; j < c; ++j) M(i, j) = scale * gauss(rng);
    return M;
}

// column sets equal as sets (inf norm, absolute tol)
inline bool same_column_set(const polyfact::Matrix& A, const polyfact::Matrix& B, double tol) {
    if (A.rows() != B.rows() || A.cols() != B.cols()) return false;
    std::vector<bool> used(static_cast<size_t>(B.cols()), false);
    for (polyfact::Index j = 0; j < A.cols(); ++j) {
        bool found = false;
        for (polyfact::Index k = 0; k < B.cols(); ++k) {
            if (!used[static_cast<size_t>(k)] &&
                (A.col(j) - B.col(k)).lpNorm<Eigen::Infinity>() <= tol) {
                used[static_cast<size_t>(k)] = true;
                found = true;
                break;
            }
        }
        if (!found) return false;
    }
    return true;
}

// Exact projection onto {||y||_1 <= radius} (optionally y >= 0) by
// enumerating KKT support/sign patterns; independent of the sort-based
// implementation. Practical for n <= 3.
inline polyfact::Vector l1_projection_oracle(const polyfact::Vector& x, double radius,
                                             bool nonneg) {
    using polyfact::Index;
    using polyfact::Vector;
    const Index n = x.size();
    Vector best = Vector::Zero(n);
    double best_d = x.squaredNorm();  // y = 0 is always feasible
    auto consider = [&](const Vector& y) {
        bool feasible = y.lpNorm<1>() <= radius + 1e-12;
        if (nonneg)
            for (Index i = 0; i < n; ++i)
                if (y(i) < -1e-12) feasible = false;
        if (!feasible) return;
        double d = (y - x).squaredNorm();
        if (d < best_d) {
            best_d = d;
            best = y;
        }
    };
    if (nonneg) consider(x.cwiseMax(0.0));
    consider(x);
    // active L1 constraint: on support J with signs s, y_i = x_i - theta*s_i,
    // theta = (s'x_J - radius)/|J|
    for (std::uint64_t mask = 1; mask < (1ULL << n); ++mask) {
        std::vector<Index> J;
        for (Index i = 0; i < n; ++i)
            if ((mask >> i) & 1) J.push_back(i);
        const auto m = static_cast<Index>(J.size());
        for (std::uint64_t smask = 0; smask < (1ULL << m); ++smask) {
            Vector y = Vector::Zero(n);
            double sx = 0;
            bool bad = false;
            for (Index k = 0; k < m; ++k) {
                double s = ((smask >> k) & 1) ? -1.0 : 1.0;
                if (nonneg && s < 0) bad = true;
                sx += s * x(J[static_cast<size_t>(k)]);
            }
            if (bad) continue;
            double theta = (sx - radius) / static_cast<double>(m);
            for (Index k = 0; k < m; ++k) {
                double s = ((smask >> k) & 1) ? -1.0 : 1.0;
                y(J[static_cast<size_t>(k)]) = x(J[static_cast<size_t>(k)]) - theta * s;
                if (y(J[static_cast<size_t>(k)]) * s < -1e-12) bad = true;
            }
            if (!bad) consider(y);
        }
    }
    return best;
}

// best (lowest-cost) assignment by brute force over all permutations
inline double brute_force_max_assignment(const polyfact::Matrix& score, std::vector<int>* best_perm = nullptr) {
    const int n = static_cast<int>(score.rows());
    std::vector<int> perm(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) perm[static_cast<size_t>(i)] = i;
    double best = -std::numeric_limits<double>::infinity();
    do {
        double s = 0;
        for (int i = 0; i < n; ++i) s += score(i, perm[static_cast<size_t>(i)]);
        if (s > best) {
            best = s;
            if (best_perm) *best_perm = perm;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

} // namespace testutil

#endif
