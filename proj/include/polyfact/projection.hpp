// Euclidean projection operators onto the supported polytope families.
#ifndef POLYFACT_PROJECTION_HPP
#define POLYFACT_PROJECTION_HPP

#include <algorithm>
#include <numeric>

#include "polyfact/polytope.hpp"
#include "polyfact/types.hpp"

namespace polyfact {

// Elementwise clip to [lo, hi]^r; exact projection for box polytopes.
inline Vector project_box(const Vector& x, double lo, double hi) {
    if (!(lo < hi)) throw PolyfactError("project_box: lo must be < hi");
    return x.cwiseMax(lo).cwiseMin(hi);
}

namespace detail {

// Soft-threshold level for sum_i max(u_i - theta, 0) = radius, u sorted not
// required on entry. Assumes sum of positive parts exceeds radius.
inline double simplex_threshold(Vector u, double radius) {
    std::sort(u.data(), u.data() + u.size(), std::greater<double>());
    double cum = 0.0;
    double theta = 0.0;
    for (Index k = 0; k < u.size(); ++k) {
        cum += u(k);
        double t = (cum - radius) / static_cast<double>(k + 1);
        if (k + 1 == u.size() || u(k + 1) <= t) {
            theta = t;
            break;
        }
    }
    return theta;
}

}  // namespace detail

// Exact projection onto {y : ||y||_1 <= radius} (plus y >= 0 when nonneg),
// via sort-based thresholding. Already-feasible inputs are returned as is.
inline Vector project_l1(const Vector& x, double radius, bool nonneg = false) {
    if (radius <= 0) throw PolyfactError("project_l1: radius must be > 0");
    if (nonneg) {
        Vector clipped = x.cwiseMax(0.0);
        if (clipped.sum() <= radius) return clipped;
        double theta = detail::simplex_threshold(clipped, radius);
        return (clipped.array() - theta).max(0.0).matrix();
    }
    if (x.lpNorm<1>() <= radius) return x;
    Vector mag = x.cwiseAbs();
    double theta = detail::simplex_threshold(mag, radius);
    return x.array().sign() * (mag.array() - theta).max(0.0);
}

namespace detail {

inline void apply_constraint_projection(Vector& x, const FeatureConstraint& c) {
    if (const auto* box = std::get_if<BoxConstraint>(&c)) {
        x(box->index) = std::clamp(x(box->index), box->lo, box->hi);
    } else if (const auto* l1 = std::get_if<L1BallConstraint>(&c)) {
        Vector sub(static_cast<Index>(l1->indices.size()));
        for (size_t j = 0; j < l1->indices.size(); ++j) sub(static_cast<Index>(j)) = x(l1->indices[j]);
        sub = project_l1(sub, l1->radius);
        for (size_t j = 0; j < l1->indices.size(); ++j) x(l1->indices[j]) = sub(static_cast<Index>(j));
    } else {
        const auto& cap = std::get<SimplexCapConstraint>(c);
        double s = 0;
        for (int i : cap.indices) s += x(i);
        if (s > cap.radius) {
            Vector sub(static_cast<Index>(cap.indices.size()));
            for (size_t j = 0; j < cap.indices.size(); ++j) sub(static_cast<Index>(j)) = x(cap.indices[j]);
            sub = project_l1(sub, cap.radius, /*nonneg=*/true);
            for (size_t j = 0; j < cap.indices.size(); ++j) x(cap.indices[j]) = sub(static_cast<Index>(j));
        }
    }
}

}  // namespace detail

// Cyclic (alternating) projection onto a FeatureSpec set: `sweeps` full
// passes over the constraints in spec order, followed by clamp passes that
// enforce feasibility to 1e-6. Plain alternation only reaches the set in the
// limit, hence the clamp.
inline Vector project_featurespec(const Vector& x, const FeatureSpec& spec, int sweeps = 5) {
    if (sweeps < 1) throw PolyfactError("project_featurespec: sweeps must be >= 1");
    Vector y = x;
    for (int s = 0; s < sweeps; ++s)
        for (const auto& c : spec.constraints) detail::apply_constraint_projection(y, c);
    for (int extra = 0; extra < 50 && !feature_spec_contains(spec, y, 1e-6); ++extra)
        for (const auto& c : spec.constraints) detail::apply_constraint_projection(y, c);
    if (!feature_spec_contains(spec, y, 1e-6))
        throw PolyfactError("project_featurespec: clamp failed to reach feasibility");
    return y;
}

enum class ProjectionMethod { Closed, DuchiL1, Cyclic };

// Column projector for a polytope; stateless and cheap to copy.
class Projector {
public:
    explicit Projector(const Polytope& target, int sweeps = 5) : sweeps_(sweeps) {
        if (auto k = target.special()) {
            kind_ = *k;
            method_ = (*k == SpecialKind::BInf || *k == SpecialKind::BInfPlus)
                          ? ProjectionMethod::Closed
                          : ProjectionMethod::DuchiL1;
        } else if (target.has_feature_spec()) {
            spec_ = target.feature_spec();
            method_ = ProjectionMethod::Cyclic;
        } else {
            throw PolyfactError(
                "Projector: only the special polytopes and feature-spec sets are supported");
        }
    }

    ProjectionMethod method() const { return method_; }

    Vector operator()(const Vector& x) const {
        switch (method_) {
            case ProjectionMethod::Closed:
                return kind_ == SpecialKind::BInf ? project_box(x, -1.0, 1.0)
                                                  : project_box(x, 0.0, 1.0);
            case ProjectionMethod::DuchiL1:
                return project_l1(x, 1.0, kind_ == SpecialKind::B1Plus);
            case ProjectionMethod::Cyclic:
                return project_featurespec(x, spec_, sweeps_);
        }
        throw PolyfactError("Projector: unreachable");
    }

    // In-place column projection of a whole matrix.
    void project_columns(Matrix& S) const {
        for (Index j = 0; j < S.cols(); ++j) S.col(j) = (*this)(S.col(j));
    }

private:
    ProjectionMethod method_ = ProjectionMethod::Closed;
    SpecialKind kind_ = SpecialKind::BInf;
    FeatureSpec spec_;
    int sweeps_;
};

} // namespace polyfact

#endif
