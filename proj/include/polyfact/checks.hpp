// Executable certificates: vertex-set symmetry (identifiability) and
// sufficient scattering of a sample set relative to the inscribed ellipsoid.
#ifndef POLYFACT_CHECKS_HPP
#define POLYFACT_CHECKS_HPP

#include <optional>
#include <vector>

#include "polyfact/mvie.hpp"
#include "polyfact/polytope.hpp"

namespace polyfact {

struct IdentifiabilityReport {
    bool identifiable = false;
    std::optional<Matrix> witness;  // a vertex-set automorphism that is not signed-permutation
    int automorphism_count = 0;
};

namespace detail {

inline bool is_signed_permutation(const Matrix& A, double tol = 1e-7) {
    const Index r = A.rows();
    for (Index i = 0; i < r; ++i) {
        int hits = 0;
        for (Index j = 0; j < r; ++j) {
            double v = std::abs(A(i, j));
            if (v > tol) {
                if (std::abs(v - 1.0) > tol) return false;
                ++hits;
            }
        }
        if (hits != 1) return false;
    }
    for (Index j = 0; j < r; ++j) {
        int hits = 0;
        for (Index i = 0; i < r; ++i)
            if (std::abs(A(i, j)) > tol) ++hits;
        if (hits != 1) return false;
    }
    return true;
}

// Does A map the columns of V bijectively onto themselves?
inline bool maps_vertex_set(const Matrix& A, const Matrix& V, double tol) {
    const Index m = V.cols();
    std::vector<bool> used(static_cast<size_t>(m), false);
    Matrix AV = A * V;
    for (Index j = 0; j < m; ++j) {
        bool matched = false;
        for (Index k = 0; k < m; ++k) {
            if (!used[static_cast<size_t>(k)] &&
                (AV.col(j) - V.col(k)).lpNorm<Eigen::Infinity>() <= tol) {
                used[static_cast<size_t>(k)] = true;
                matched = true;
                break;
            }
        }
        if (!matched) return false;
    }
    return true;
}

}  // namespace detail

// Enumerates candidate linear automorphisms of the vertex set: a linear map
// is fixed by the images of r independent vertices, so only ordered r-tuples
// of candidate images need checking (not all vertex bijections).
inline IdentifiabilityReport check_identifiable(const Polytope& p, double tol = 1e-7) {
    VertexForm vf = p.has_vform() ? p.vform()
                                  : halfspaces_to_vertices(p.has_hform()
                                                               ? p.hform()
                                                               : feature_spec_to_halfspaces(
                                                                     p.feature_spec()));
    const Index r = vf.dim(), K = vf.num_vertices();
    if (K > 24 || r > 6)
        throw PolyfactError("check_identifiable: scale limits exceeded (K <= 24, r <= 6)");

    // pick r linearly independent vertices greedily
    std::vector<Index> base;
    {
        Matrix B(r, 0);
        for (Index j = 0; j < K && static_cast<Index>(base.size()) < r; ++j) {
            Matrix cand(r, B.cols() + 1);
            cand << B, vf.V.col(j);
            Eigen::ColPivHouseholderQR<Matrix> qr(cand);
            qr.setThreshold(1e-9);
            if (qr.rank() == cand.cols()) {
                B = cand;
                base.push_back(j);
            }
        }
        if (static_cast<Index>(base.size()) < r)
            throw PolyfactError("check_identifiable: degenerate vertex set");
    }
    Matrix Vbase(r, r);
    for (Index j = 0; j < r; ++j) Vbase.col(j) = vf.V.col(base[static_cast<size_t>(j)]);
    Matrix Vbase_inv = Vbase.inverse();

    const double scl = 1.0 + vf.V.lpNorm<Eigen::Infinity>();
    IdentifiabilityReport rep;
    rep.identifiable = true;

    std::vector<Index> pick(static_cast<size_t>(r), 0);
    std::vector<bool> taken(static_cast<size_t>(K), false);
    // DFS over ordered r-tuples of distinct vertices
    auto dfs = [&](auto&& self, Index depth) -> void {
        if (depth == r) {
            Matrix W(r, r);
            for (Index j = 0; j < r; ++j) W.col(j) = vf.V.col(pick[static_cast<size_t>(j)]);
            Matrix A = W * Vbase_inv;
            if (!detail::maps_vertex_set(A, vf.V, tol * scl)) return;
            ++rep.automorphism_count;
            if (!detail::is_signed_permutation(A, tol)) {
                rep.identifiable = false;
                if (!rep.witness) rep.witness = A;
            }
            return;
        }
        for (Index k = 0; k < K; ++k) {
            if (taken[static_cast<size_t>(k)]) continue;
            taken[static_cast<size_t>(k)] = true;
            pick[static_cast<size_t>(depth)] = k;
            self(self, depth + 1);
            taken[static_cast<size_t>(k)] = false;
        }
    };
    dfs(dfs, 0);
    return rep;
}

struct ScatterReport {
    bool ss1_holds = false;
    bool ss2_holds = false;
    std::vector<Vector> tangent_polar_points;
    std::vector<Vector> violating_points;
};

// Checks the two scattering conditions of a sample matrix S against a
// polytope P with inscribed ellipsoid E = (C, g):
//   (i)  P contains conv(S) and conv(S) contains E,
//   (ii) the tangency normals of conv(S) against E, mapped to the polar
//        domain, coincide with the polar's vertex set.
inline ScatterReport check_scattered(const Matrix& S, const Polytope& p, double tol = 1e-6) {
    const Index r = S.rows();
    if (r > 4 || S.cols() > 200)
        throw PolyfactError("check_scattered: scale limits exceeded (r <= 4, N <= 200)");
    Ellipsoid e = mvie(p);

    ScatterReport rep;
    bool membership = true;
    for (Index j = 0; j < S.cols(); ++j) {
        if (!contains(p, S.col(j), tol)) {
            membership = false;
            rep.violating_points.push_back(S.col(j));
        }
    }

    // facets of conv(S)
    Matrix hull = extreme_points(S);
    HalfspaceForm hs;
    try {
        hs = vertices_to_halfspaces(VertexForm{hull});
    } catch (const PolyfactError&) {
        rep.ss1_holds = false;
        rep.ss2_holds = false;
        return rep;
    }

    bool contains_mvie = true;
    std::vector<Index> tight;
    for (Index i = 0; i < hs.num_facets(); ++i) {
        double margin = hs.b(i) - hs.A.row(i).dot(e.g) - (e.C * hs.A.row(i).transpose()).norm();
        if (margin < -tol) contains_mvie = false;
        else if (margin <= tol) tight.push_back(i);
    }
    rep.ss1_holds = membership && contains_mvie;

    for (Index i : tight) {
        double denom = hs.b(i) - hs.A.row(i).dot(e.g);
        rep.tangent_polar_points.push_back(hs.A.row(i).transpose() / denom);
    }

    // ext(P^{*,g}) from the polytope's facets
    Polytope pol = polar(p.has_hform() ? p
                                       : Polytope::with_forms(
                                             p.has_feature_spec()
                                                 ? feature_spec_to_halfspaces(p.feature_spec())
                                                 : vertices_to_halfspaces(p.vform()),
                                             std::nullopt, std::nullopt),
                         e.g);
    Matrix polar_ext = extreme_points(pol.vform().V);

    auto set_equal = [&](const std::vector<Vector>& A, const Matrix& B) {
        std::vector<bool> used(static_cast<size_t>(B.cols()), false);
        for (const auto& a : A) {
            bool found = false;
            for (Index k = 0; k < B.cols(); ++k) {
                if ((a - B.col(k)).lpNorm<Eigen::Infinity>() <= 1e-6 * (1.0 + B.col(k).norm())) {
                    used[static_cast<size_t>(k)] = true;
                    found = true;
                }
            }
            if (!found) return false;
        }
        for (bool u : used)
            if (!u) return false;
        return true;
    };
    rep.ss2_holds = rep.ss1_holds && set_equal(rep.tangent_polar_points, polar_ext);
    return rep;
}

} // namespace polyfact

#endif
