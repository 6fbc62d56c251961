// Synthetic ground truth: scattered latent samples (polar-domain and
// inflated-ellipsoid constructions), Gaussian mixing matrices, and noise at
// a target SNR.
#ifndef POLYFACT_DATAGEN_HPP
#define POLYFACT_DATAGEN_HPP

#include <random>

#include "polyfact/mvie.hpp"
#include "polyfact/projection.hpp"
#include "polyfact/polytope.hpp"

namespace polyfact {

struct GroundTruth {
    Matrix H_g;
    Matrix S_g;
    Matrix Y_clean;
    Matrix Y_noisy;
    double snr_db = std::numeric_limits<double>::infinity();
    std::uint64_t seed = 0;
};

struct InflationParams {
    double rho = 1.0;  // 1 = the inscribed ellipsoid itself; < 1 stays strictly inside it
    int N = 0;

    void validate() const {
        if (rho <= 0.0) throw PolyfactError("InflationParams: rho must be > 0");
        if (N < 1) throw PolyfactError("InflationParams: N must be >= 1");
    }
};

namespace detail {

// uniform sample in radius*B2
inline Vector uniform_in_ball(Index r, double radius, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    Vector d(r);
    for (Index i = 0; i < r; ++i) d(i) = gauss(rng);
    d.normalize();
    return radius * std::pow(unif(rng), 1.0 / static_cast<double>(r)) * d;
}

}  // namespace detail

// Builds a scattered latent set by construction in the polar domain:
//   1. seed the polar hull with the polar's vertex set, then pad with L - f0
//      random interior points of the polar ellipsoid,
//   2. convert the hull of those points to halfspaces,
//   3. map each halfspace (a, b) back to the sample-domain point a/b + g.
// The output is guaranteed to satisfy both scattering conditions.
inline Matrix generate_polar_domain(const Polytope& p, int L, std::uint64_t seed) {
    HalfspaceForm h = p.has_hform() ? p.hform()
                                    : (p.has_feature_spec()
                                           ? feature_spec_to_halfspaces(p.feature_spec())
                                           : vertices_to_halfspaces(p.vform()));
    if (h.dim() > 4) throw PolyfactError("generate_polar_domain: r <= 4 required");
    Ellipsoid e = mvie(p);

    Polytope pol = polar(Polytope(h), e.g);
    Matrix K0 = extreme_points(pol.vform().V);
    const Index f0 = K0.cols();
    if (L < f0)
        throw PolyfactError("generate_polar_domain: L must be >= the polytope's facet count");

    Matrix Cinv = e.C.llt().solve(Matrix::Identity(e.dim(), e.dim()));
    std::mt19937_64 rng(seed);
    Matrix K(h.dim(), L);
    K.leftCols(f0) = K0;
    for (Index j = f0; j < L; ++j)
        K.col(j) = Cinv * detail::uniform_in_ball(h.dim(), 0.9, rng);

    Matrix hullV = extreme_points(K);
    HalfspaceForm hh = vertices_to_halfspaces(VertexForm{hullV});
    Matrix S(h.dim(), hh.num_facets());
    for (Index i = 0; i < hh.num_facets(); ++i)
        S.col(i) = hh.A.row(i).transpose() / hh.b(i) + e.g;
    return S;
}

// Draws samples inside the rho-inflated inscribed ellipsoid and projects
// them onto the polytope.
inline Matrix generate_inflated_mvie(const Polytope& p, const InflationParams& params,
                                     std::uint64_t seed) {
    params.validate();
    Ellipsoid e = mvie(p);
    Projector project(p);
    const Index r = e.dim();
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const double sigma = params.rho / std::sqrt(static_cast<double>(r));

    Matrix S(r, params.N);
    for (int j = 0; j < params.N; ++j) {
        Vector w(r);
        for (Index i = 0; i < r; ++i) w(i) = sigma * gauss(rng);
        if (w.norm() > params.rho) w *= params.rho / w.norm();  // saturate to rho*B2
        S.col(j) = project(e.C * w + e.g);
    }
    return S;
}

// i.i.d. standard normal mixing matrix, redrawn while ill conditioned.
inline Matrix generate_mixing(int M, int r, std::uint64_t seed) {
    if (M < r) throw PolyfactError("generate_mixing: M must be >= r");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int attempt = 0; attempt < 64; ++attempt) {
        Matrix H(M, r);
        for (int i = 0; i < M; ++i)
            for (int j = 0; j < r; ++j) H(i, j) = gauss(rng);
        Eigen::JacobiSVD<Matrix> svd(H);
        if (svd.singularValues()(r - 1) > 1e-6) return H;
    }
    throw PolyfactError("generate_mixing: failed to draw a well-conditioned matrix");
}

// Adds white Gaussian noise scaled so that the per-entry average signal
// power over noise power hits the target. snr_db = +inf returns a copy.
inline Matrix add_noise(const Matrix& Y_clean, double snr_db, std::uint64_t seed) {
    if (!Y_clean.allFinite()) throw PolyfactError("add_noise: non-finite input");
    if (std::isinf(snr_db)) return Y_clean;
    const double signal_power = Y_clean.squaredNorm() / static_cast<double>(Y_clean.size());
    const double sigma = std::sqrt(signal_power / std::pow(10.0, snr_db / 10.0));
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Matrix Y = Y_clean;
    for (Index i = 0; i < Y.rows(); ++i)
        for (Index j = 0; j < Y.cols(); ++j) Y(i, j) += sigma * gauss(rng);
    return Y;
}

} // namespace polyfact

#endif
