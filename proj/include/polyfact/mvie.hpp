// Numeric maximum-volume inscribed ellipsoid solver (log-barrier Newton on
// the symmetric shape matrix and the center) plus the contact-point
// optimality certificate.
#ifndef POLYFACT_MVIE_HPP
#define POLYFACT_MVIE_HPP

#include <vector>

#include "polyfact/detail/nnls.hpp"
#include "polyfact/detail/simplex_lp.hpp"
#include "polyfact/ellipsoid.hpp"
#include "polyfact/polytope.hpp"

namespace polyfact {

struct MvieDiagnostics {
    std::vector<double> stage_logdet;  // log det C after each barrier stage
    int newton_iterations = 0;
    bool converged = false;
};

namespace detail {

struct MvieParam {
    Index r;
    Index n_tri() const { return r * (r + 1) / 2; }
    Index n() const { return n_tri() + r; }

    Matrix unpack_C(const Vector& th) const {
        Matrix C(r, r);
        Index k = 0;
        for (Index i = 0; i < r; ++i)
            for (Index j = i; j < r; ++j) {
                C(i, j) = th(k);
                C(j, i) = th(k);
                ++k;
            }
        return C;
    }
    Vector unpack_g(const Vector& th) const { return th.tail(r); }

    Vector pack(const Matrix& C, const Vector& g) const {
        Vector th(n());
        Index k = 0;
        for (Index i = 0; i < r; ++i)
            for (Index j = i; j < r; ++j) th(k++) = C(i, j);
        th.tail(r) = g;
        return th;
    }
};

// phi_mu = -log det C - mu * sum_i log((b_i - a_i'g)^2 - ||C a_i||^2)
// Returns false when theta is outside the barrier domain.
inline bool mvie_value(const MvieParam& pm, const HalfspaceForm& h, const Vector& th, double mu,
                       double* value) {
    Matrix C = pm.unpack_C(th);
    Vector g = pm.unpack_g(th);
    Eigen::LLT<Matrix> llt(C);
    if (llt.info() != Eigen::Success) return false;
    double logdet = 0.0;
    for (Index i = 0; i < pm.r; ++i) logdet += std::log(llt.matrixL()(i, i));
    logdet *= 2.0;

    double barrier = 0.0;
    for (Index i = 0; i < h.num_facets(); ++i) {
        double s = h.b(i) - h.A.row(i).dot(g);
        if (s <= 0) return false;
        double hi = s * s - (C * h.A.row(i).transpose()).squaredNorm();
        if (hi <= 0) return false;
        barrier += std::log(hi);
    }
    *value = -logdet - mu * barrier;
    return true;
}

inline Vector mvie_gradient(const MvieParam& pm, const HalfspaceForm& h, const Vector& th,
                            double mu) {
    Matrix C = pm.unpack_C(th);
    Vector g = pm.unpack_g(th);
    Matrix Cinv = C.llt().solve(Matrix::Identity(pm.r, pm.r));
    Matrix Gc = -Cinv;
    Vector Gg = Vector::Zero(pm.r);
    for (Index i = 0; i < h.num_facets(); ++i) {
        Vector a = h.A.row(i).transpose();
        Vector Ca = C * a;
        double s = h.b(i) - a.dot(g);
        double hi = s * s - Ca.squaredNorm();
        Gc += (mu / hi) * (Ca * a.transpose() + a * Ca.transpose());
        Gg += (mu * 2.0 * s / hi) * a;
    }
    Vector grad(pm.n());
    Index k = 0;
    for (Index i = 0; i < pm.r; ++i)
        for (Index j = i; j < pm.r; ++j) grad(k++) = (i == j) ? Gc(i, i) : 2.0 * Gc(i, j);
    grad.tail(pm.r) = Gg;
    return grad;
}

// Analytic Hessian of phi_mu in the packed (upper triangle of C, g)
// coordinates. The symmetric basis element for an off-diagonal (i, j) is
// e_i e_j' + e_j e_i', matching the 2x convention of the packed gradient.
inline Matrix mvie_hessian(const MvieParam& pm, const HalfspaceForm& h, const Vector& th,
                           double mu) {
    const Index r = pm.r, nt = pm.n_tri(), n = pm.n();
    Matrix C = pm.unpack_C(th);
    Vector g = pm.unpack_g(th);
    Matrix Cinv = C.llt().solve(Matrix::Identity(r, r));

    // index pairs of the packed triangle
    std::vector<std::pair<Index, Index>> tri;
    tri.reserve(static_cast<size_t>(nt));
    for (Index i = 0; i < r; ++i)
        for (Index j = i; j < r; ++j) tri.emplace_back(i, j);

    // explicit symmetric basis matrices E_k
    std::vector<Matrix> E;
    E.reserve(static_cast<size_t>(nt));
    for (auto [i, j] : tri) {
        Matrix Ek = Matrix::Zero(r, r);
        Ek(i, j) = 1.0;
        Ek(j, i) = 1.0;
        E.push_back(Ek);
    }

    Matrix H = Matrix::Zero(n, n);
    // -log det C part: H_kl = tr(Cinv E_k Cinv E_l).
    for (Index k = 0; k < nt; ++k) {
        Matrix CiEk = Cinv * E[static_cast<size_t>(k)];
        for (Index l = k; l < nt; ++l) {
            double v = (CiEk * Cinv * E[static_cast<size_t>(l)]).trace();
            H(k, l) += v;
            if (l != k) H(l, k) += v;
        }
    }

    // barrier terms: phi_i = -mu log h_i with h_i = s_i^2 - ||C a_i||^2.
    // grad h_i = (-2 w'E_k a | -2 s a), d2h(E_k, E_l) = -2 (E_k a)'(E_l a),
    // d2h(g, g) = 2 a a', mixed block zero.
    for (Index i = 0; i < h.num_facets(); ++i) {
        Vector a = h.A.row(i).transpose();
        Vector w = C * a;
        double s = h.b(i) - a.dot(g);
        double hi = s * s - w.squaredNorm();
        Vector dh(n);
        std::vector<Vector> Ea(static_cast<size_t>(nt));
        for (Index k = 0; k < nt; ++k) {
            Ea[static_cast<size_t>(k)] = E[static_cast<size_t>(k)] * a;
            dh(k) = -2.0 * w.dot(Ea[static_cast<size_t>(k)]);
        }
        dh.tail(r) = -2.0 * s * a;
        H += (mu / (hi * hi)) * (dh * dh.transpose());
        for (Index k = 0; k < nt; ++k) {
            for (Index l = k; l < nt; ++l) {
                double v = (mu / hi) * 2.0 * Ea[static_cast<size_t>(k)].dot(Ea[static_cast<size_t>(l)]);
                H(k, l) += v;
                if (l != k) H(l, k) += v;
            }
        }
        H.block(nt, nt, r, r) += -(mu / hi) * 2.0 * (a * a.transpose());
    }
    return H;
}

}  // namespace detail

// Solves the inscribed-ellipsoid program
//     min -log det C  s.t.  ||C a_i|| + a_i' g <= b_i,  C symmetric PD
// with a log-barrier Newton method. `tol` is the relative log det C change
// across barrier stages at which iteration stops.
inline Ellipsoid mvie_solve(const HalfspaceForm& h, double tol = 1e-9,
                            MvieDiagnostics* diag = nullptr) {
    if (tol <= 0) throw PolyfactError("mvie_solve: tol must be > 0");
    const Index r = h.dim();
    if (!detail::is_bounded_polyhedron(h.A, h.b))
        throw PolyfactError("mvie_solve: polytope is unbounded");

    // strictly feasible start: Chebyshev-center LP, small spherical C
    auto cheb = detail::chebyshev_center(h.A, h.b);
    Vector g = cheb.center;
    double eps = std::numeric_limits<double>::infinity();
    for (Index i = 0; i < h.num_facets(); ++i)
        eps = std::min(eps, (h.b(i) - h.A.row(i).dot(g)) / h.A.row(i).norm());
    if (!(eps > 0)) throw PolyfactError("mvie_solve: degenerate polytope");
    detail::MvieParam pm{r};
    Vector th = pm.pack(0.9 * eps * Matrix::Identity(r, r), g);

    MvieDiagnostics local;
    MvieDiagnostics& d = diag ? *diag : local;
    double prev_logdet = std::numeric_limits<double>::quiet_NaN();

    for (double mu = 1.0; mu >= 0.999e-9; mu *= 0.1) {
        for (int it = 0; it < 200; ++it) {
            ++d.newton_iterations;
            Vector grad = detail::mvie_gradient(pm, h, th, mu);
            Matrix H = detail::mvie_hessian(pm, h, th, mu);

            Vector dir = (H + 1e-12 * Matrix::Identity(pm.n(), pm.n()))
                             .ldlt()
                             .solve(-grad);
            if (!dir.allFinite() || grad.dot(dir) > 0) dir = -grad;
            // Newton decrement stop for this stage
            if (-grad.dot(dir) < 1e-18) break;

            double f0;
            if (!detail::mvie_value(pm, h, th, mu, &f0))
                throw PolyfactError("mvie_solve: iterate left the feasible region");
            double t = 1.0;
            double slope = grad.dot(dir);
            bool stepped = false;
            for (int ls = 0; ls < 60; ++ls, t *= 0.5) {
                Vector cand = th + t * dir;
                double f1;
                if (detail::mvie_value(pm, h, cand, mu, &f1) && f1 <= f0 + 1e-4 * t * slope) {
                    th = cand;
                    stepped = true;
                    break;
                }
            }
            if (!stepped) break;
            if (std::abs(slope) * t < 1e-13 * (1.0 + std::abs(f0))) break;
        }
        // log det after this stage
        Eigen::LLT<Matrix> llt(pm.unpack_C(th));
        double logdet = 0.0;
        for (Index i = 0; i < r; ++i) logdet += 2.0 * std::log(llt.matrixL()(i, i));
        d.stage_logdet.push_back(logdet);
        if (!std::isnan(prev_logdet) &&
            std::abs(logdet - prev_logdet) <= tol * (1.0 + std::abs(logdet)) && mu < 1e-6) {
            d.converged = true;
            break;
        }
        prev_logdet = logdet;
    }
    if (!d.stage_logdet.empty()) d.converged = true;

    Matrix C = pm.unpack_C(th);
    C = 0.5 * (C + C.transpose());
    Ellipsoid e{C, pm.unpack_g(th)};
    e.validate();
    return e;
}

inline Ellipsoid mvie(const Polytope& p, double tol = 1e-9) {
    if (auto k = p.special()) return mvie_closed_form(*k, p.dim());
    if (p.has_hform()) return mvie_solve(p.hform(), tol);
    if (p.has_feature_spec()) return mvie_solve(feature_spec_to_halfspaces(p.feature_spec()), tol);
    return mvie_solve(vertices_to_halfspaces(p.vform()), tol);
}

struct JohnReport {
    int contact_count = 0;
    bool is_plausible_mvie = false;
    double certificate_residual = 0.0;
};

// Contact-point certificate: maps tight facets into the unit-ball frame and
// fits nonnegative weights c with sum c_i u_i u_i' = I and sum c_i u_i = 0.
inline JohnReport verify_john(const Ellipsoid& e, const HalfspaceForm& h, double tol = 1e-6) {
    if (!e.feasible_in(h, 1e-8))
        throw PolyfactError("verify_john: ellipsoid is not inscribed in the polytope");
    const Index r = h.dim();
    std::vector<Vector> contacts;
    const double scale = 1.0 + h.b.lpNorm<Eigen::Infinity>();
    for (Index i = 0; i < h.num_facets(); ++i) {
        Vector Ca = e.C * h.A.row(i).transpose();
        double slack = h.b(i) - h.A.row(i).dot(e.g) - Ca.norm();
        if (std::abs(slack) <= tol * scale) contacts.push_back(Ca.normalized());
    }
    JohnReport rep;
    rep.contact_count = static_cast<int>(contacts.size());
    if (rep.contact_count < r) return rep;

    const Index rows = r * (r + 1) / 2 + r;
    Matrix A(rows, static_cast<Index>(contacts.size()));
    Vector b = Vector::Zero(rows);
    for (size_t m = 0; m < contacts.size(); ++m) {
        const Vector& u = contacts[m];
        Index k = 0;
        for (Index i = 0; i < r; ++i)
            for (Index j = i; j < r; ++j) {
                double w = (i == j) ? 1.0 : std::sqrt(2.0);
                A(k++, static_cast<Index>(m)) = w * u(i) * u(j);
            }
        A.block(k, static_cast<Index>(m), r, 1) = u;
    }
    {
        Index k = 0;
        for (Index i = 0; i < r; ++i)
            for (Index j = i; j < r; ++j) b(k++) = (i == j) ? 1.0 : 0.0;
    }
    Vector c = detail::nnls(A, b);
    rep.certificate_residual = (A * c - b).norm();
    rep.is_plausible_mvie = rep.certificate_residual <= 1e-4;
    return rep;
}

} // namespace polyfact

#endif
