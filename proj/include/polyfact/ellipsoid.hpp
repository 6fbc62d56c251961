// Ellipsoids as images of the unit ball, closed-form maximum-volume
// inscribed ellipsoids for the stock polytopes, and ellipsoid polars.
#ifndef POLYFACT_ELLIPSOID_HPP
#define POLYFACT_ELLIPSOID_HPP

#include "polyfact/polytope.hpp"
#include "polyfact/types.hpp"

namespace polyfact {

// E = {C u + g : ||u||_2 <= 1} with C symmetric positive definite.
struct Ellipsoid {
    Matrix C;
    Vector g;

    Index dim() const { return g.size(); }

    void validate() const {
        if (C.rows() != C.cols() || C.rows() != g.size())
            throw PolyfactError("Ellipsoid: shape mismatch");
        if ((C - C.transpose()).lpNorm<Eigen::Infinity>() > 1e-10)
            throw PolyfactError("Ellipsoid: C is not symmetric");
        Eigen::SelfAdjointEigenSolver<Matrix> es(C);
        if (es.eigenvalues()(0) <= 0)
            throw PolyfactError("Ellipsoid: C is not positive definite");
    }

    // Inscribed-ellipsoid feasibility: ||C a_i|| + a_i' g <= b_i for all facets.
    bool feasible_in(const HalfspaceForm& h, double tol = 1e-9) const {
        for (Index i = 0; i < h.num_facets(); ++i) {
            if ((C * h.A.row(i).transpose()).norm() + h.A.row(i).dot(g) > h.b(i) + tol)
                return false;
        }
        return true;
    }
};

// Closed-form maximum-volume inscribed ellipsoids for the four stock
// polytopes:
//   BInf     -> unit ball
//   B1       -> (1/sqrt(r)) unit ball
//   BInfPlus -> 0.5 I, centered at 0.5*1
//   B1Plus   -> nonspherical; see the rank-one corrected form below
inline Ellipsoid mvie_closed_form(SpecialKind kind, int r) {
    if (r < 1) throw PolyfactError("mvie_closed_form: dimension must be >= 1");
    const double rd = static_cast<double>(r);
    switch (kind) {
        case SpecialKind::BInf:
            return {Matrix::Identity(r, r), Vector::Zero(r)};
        case SpecialKind::B1:
            return {Matrix::Identity(r, r) / std::sqrt(rd), Vector::Zero(r)};
        case SpecialKind::BInfPlus:
            return {0.5 * Matrix::Identity(r, r), 0.5 * Vector::Ones(r)};
        case SpecialKind::B1Plus: {
            Matrix C = (1.0 / std::sqrt(rd)) *
                       ((1.0 / std::sqrt(rd + 1.0)) * Matrix::Identity(r, r) -
                        (std::sqrt(rd + 1.0) - 1.0) / (rd * rd + rd) * Matrix::Ones(r, r));
            return {C, Vector::Ones(r) / (rd + 1.0)};
        }
    }
    throw PolyfactError("mvie_closed_form: unknown kind");
}

// Polar about the center g: {C^{-1} u : ||u||_2 <= 1} centered at the origin.
inline Ellipsoid ellipsoid_polar(const Ellipsoid& e) {
    Eigen::FullPivLU<Matrix> lu(e.C);
    if (!lu.isInvertible()) throw PolyfactError("ellipsoid_polar: singular C");
    Matrix Ci = lu.inverse();
    Ci = 0.5 * (Ci + Ci.transpose());
    return {Ci, Vector::Zero(e.dim())};
}

} // namespace polyfact

#endif
