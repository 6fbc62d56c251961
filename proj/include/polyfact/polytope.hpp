// Convex polytope representations (halfspace form, vertex form, composite
// feature specs) and the low-dimension conversion machinery between them.
#ifndef POLYFACT_POLYTOPE_HPP
#define POLYFACT_POLYTOPE_HPP

#include <algorithm>
#include <optional>
#include <variant>
#include <vector>

#include "polyfact/detail/simplex_lp.hpp"
#include "polyfact/types.hpp"

namespace polyfact {

// Tolerance used when classifying a numerical point as a vertex / member of a
// V-form set. Exposed as a knob because there is no canonical choice.
inline constexpr double kVertexTol = 1e-8;
inline constexpr double kFacetDedupTol = 1e-9;

// ---------------------------------------------------------------------------
// Representations
// ---------------------------------------------------------------------------

// {x | A x <= b}; rows of A are face normals.
struct HalfspaceForm {
    Matrix A;  // f x r
    Vector b;  // f

    Index dim() const { return A.cols(); }
    Index num_facets() const { return A.rows(); }

    void validate() const {
        if (A.rows() != b.size()) throw PolyfactError("HalfspaceForm: shape mismatch");
        for (Index i = 0; i < A.rows(); ++i)
            if (A.row(i).norm() < 1e-14)
                throw PolyfactError("HalfspaceForm: zero facet normal");
        if (!detail::is_bounded_polyhedron(A, b))
            throw PolyfactError("HalfspaceForm: polyhedron is unbounded");
    }
};

// conv of columns of V.
struct VertexForm {
    Matrix V;  // r x m

    Index dim() const { return V.rows(); }
    Index num_vertices() const { return V.cols(); }
};

struct BoxConstraint {
    int index;
    double lo, hi;
};

struct L1BallConstraint {
    std::vector<int> indices;
    double radius;
};

// 1' x_J <= radius with nonnegativity of x_J expected from Box entries.
struct SimplexCapConstraint {
    std::vector<int> indices;
    double radius;
};

using FeatureConstraint = std::variant<BoxConstraint, L1BallConstraint, SimplexCapConstraint>;

// Factored description of a polytope as per-coordinate and per-subvector
// attributes. Kept first class because projection is much cheaper on the
// factored form than on the expanded halfspace list.
struct FeatureSpec {
    int dim = 0;
    std::vector<FeatureConstraint> constraints;

    void validate() const {
        if (dim < 1) throw PolyfactError("FeatureSpec: dim must be >= 1");
        std::vector<bool> bounded_by_box(dim, false), l1_covered(dim, false);
        for (const auto& c : constraints) {
            if (const auto* box = std::get_if<BoxConstraint>(&c)) {
                if (box->index < 0 || box->index >= dim)
                    throw PolyfactError("FeatureSpec: box index out of range");
                if (!(box->lo < box->hi)) throw PolyfactError("FeatureSpec: box lo must be < hi");
                bounded_by_box[box->index] = true;
            } else if (const auto* l1 = std::get_if<L1BallConstraint>(&c)) {
                if (l1->radius <= 0) throw PolyfactError("FeatureSpec: radius must be > 0");
                for (int i : l1->indices) {
                    if (i < 0 || i >= dim) throw PolyfactError("FeatureSpec: index out of range");
                    l1_covered[i] = true;
                }
            } else {
                const auto& cap = std::get<SimplexCapConstraint>(c);
                if (cap.radius <= 0) throw PolyfactError("FeatureSpec: radius must be > 0");
                for (int i : cap.indices) {
                    if (i < 0 || i >= dim) throw PolyfactError("FeatureSpec: index out of range");
                }
            }
        }
        for (int i = 0; i < dim; ++i) {
            if (!bounded_by_box[i] && !l1_covered[i])
                throw PolyfactError("FeatureSpec: coordinate " + std::to_string(i) +
                                    " is unbounded");
        }
    }
};

enum class SpecialKind { BInf, B1, BInfPlus, B1Plus };

inline const char* special_kind_name(SpecialKind k) {
    switch (k) {
        case SpecialKind::BInf: return "binf";
        case SpecialKind::B1: return "b1";
        case SpecialKind::BInfPlus: return "binfplus";
        case SpecialKind::B1Plus: return "b1plus";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Polytope
// ---------------------------------------------------------------------------

// Immutable after construction. At least one representation is always
// present; cached alternates, when present, describe the same set.
class Polytope {
public:
    explicit Polytope(HalfspaceForm h) : dim_(static_cast<int>(h.dim())), hform_(std::move(h)) {}
    explicit Polytope(VertexForm v) : dim_(static_cast<int>(v.dim())), vform_(std::move(v)) {}
    explicit Polytope(FeatureSpec f) : dim_(f.dim), fspec_(std::move(f)) {}

    int dim() const { return dim_; }

    bool has_hform() const { return hform_.has_value(); }
    bool has_vform() const { return vform_.has_value(); }
    bool has_feature_spec() const { return fspec_.has_value(); }
    std::optional<SpecialKind> special() const { return special_; }

    const HalfspaceForm& hform() const {
        if (!hform_) throw PolyfactError("Polytope: no halfspace form available");
        return *hform_;
    }
    const VertexForm& vform() const {
        if (!vform_) throw PolyfactError("Polytope: no vertex form available");
        return *vform_;
    }
    const FeatureSpec& feature_spec() const {
        if (!fspec_) throw PolyfactError("Polytope: no feature spec available");
        return *fspec_;
    }

    static Polytope with_forms(std::optional<HalfspaceForm> h, std::optional<VertexForm> v,
                               std::optional<FeatureSpec> f,
                               std::optional<SpecialKind> kind = std::nullopt) {
        Polytope p;
        if (h) p.dim_ = static_cast<int>(h->dim());
        else if (v) p.dim_ = static_cast<int>(v->dim());
        else if (f) p.dim_ = f->dim;
        else throw PolyfactError("Polytope: at least one representation required");
        p.hform_ = std::move(h);
        p.vform_ = std::move(v);
        p.fspec_ = std::move(f);
        p.special_ = kind;
        return p;
    }

private:
    Polytope() = default;
    int dim_ = 0;
    std::optional<HalfspaceForm> hform_;
    std::optional<VertexForm> vform_;
    std::optional<FeatureSpec> fspec_;
    std::optional<SpecialKind> special_;
};

// ---------------------------------------------------------------------------
// Halfspace dedup
// ---------------------------------------------------------------------------

namespace detail {

// Lexicographic dedup on unit-normalized (a, b) rows.
inline HalfspaceForm dedup_halfspaces(const Matrix& A, const Vector& b, double tol = kFacetDedupTol) {
    const Index f = A.rows(), r = A.cols();
    std::vector<Index> keep;
    Matrix N(f, r + 1);
    for (Index i = 0; i < f; ++i) {
        double nrm = A.row(i).norm();
        if (nrm < 1e-14) throw PolyfactError("dedup_halfspaces: zero normal");
        N.row(i).head(r) = A.row(i) / nrm;
        N(i, r) = b(i) / nrm;
    }
    for (Index i = 0; i < f; ++i) {
        bool dup = false;
        for (Index k : keep) {
            if ((N.row(i) - N.row(k)).lpNorm<Eigen::Infinity>() <= tol) {
                dup = true;
                break;
            }
        }
        if (!dup) keep.push_back(i);
    }
    HalfspaceForm out;
    out.A.resize(static_cast<Index>(keep.size()), r);
    out.b.resize(static_cast<Index>(keep.size()));
    for (Index i = 0; i < static_cast<Index>(keep.size()); ++i) {
        out.A.row(i) = A.row(keep[static_cast<size_t>(i)]);
        out.b(i) = b(keep[static_cast<size_t>(i)]);
    }
    return out;
}

inline void append_sign_patterns(const std::vector<int>& idx, double radius, int dim,
                                 std::vector<Vector>& rows, std::vector<double>& offs) {
    const size_t k = idx.size();
    if (k > 20) throw PolyfactError("l1 expansion: subset too large (> 20 indices)");
    for (std::uint64_t mask = 0; mask < (1ULL << k); ++mask) {
        Vector a = Vector::Zero(dim);
        for (size_t j = 0; j < k; ++j) a(idx[j]) = (mask >> j) & 1 ? -1.0 : 1.0;
        rows.push_back(a);
        offs.push_back(radius);
    }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

inline HalfspaceForm feature_spec_to_halfspaces(const FeatureSpec& spec) {
    spec.validate();
    std::vector<Vector> rows;
    std::vector<double> offs;
    for (const auto& c : spec.constraints) {
        if (const auto* box = std::get_if<BoxConstraint>(&c)) {
            Vector a = Vector::Zero(spec.dim);
            a(box->index) = 1.0;
            rows.push_back(a);
            offs.push_back(box->hi);
            rows.push_back(-a);
            offs.push_back(-box->lo);
        } else if (const auto* l1 = std::get_if<L1BallConstraint>(&c)) {
            detail::append_sign_patterns(l1->indices, l1->radius, spec.dim, rows, offs);
        } else {
            const auto& cap = std::get<SimplexCapConstraint>(c);
            Vector a = Vector::Zero(spec.dim);
            for (int i : cap.indices) a(i) = 1.0;
            rows.push_back(a);
            offs.push_back(cap.radius);
        }
    }
    Matrix A(static_cast<Index>(rows.size()), spec.dim);
    Vector b(static_cast<Index>(rows.size()));
    for (Index i = 0; i < A.rows(); ++i) {
        A.row(i) = rows[static_cast<size_t>(i)];
        b(i) = offs[static_cast<size_t>(i)];
    }
    return detail::dedup_halfspaces(A, b);
}

namespace detail {

inline Matrix binary_columns(int r, bool signed_entries) {
    const std::uint64_t count = 1ULL << r;
    Matrix V(r, static_cast<Index>(count));
    for (std::uint64_t m = 0; m < count; ++m)
        for (int i = 0; i < r; ++i)
            V(i, static_cast<Index>(m)) = (m >> i) & 1 ? (signed_entries ? -1.0 : 0.0) : 1.0;
    return V;
}

}  // namespace detail

// The four stock polytopes with both representations cached. The exponential
// side of the representation is skipped above 2^20 entries.
inline Polytope make_special(SpecialKind kind, int r) {
    if (r < 1) throw PolyfactError("make_special: dimension must be >= 1");
    const bool small_enough = r <= 20;
    std::optional<HalfspaceForm> h;
    std::optional<VertexForm> v;
    switch (kind) {
        case SpecialKind::BInf: {
            Matrix A(2 * r, r);
            A << Matrix::Identity(r, r), -Matrix::Identity(r, r);
            h = HalfspaceForm{A, Vector::Ones(2 * r)};
            if (small_enough) v = VertexForm{detail::binary_columns(r, true)};
            break;
        }
        case SpecialKind::B1: {
            if (small_enough) {
                Matrix A = detail::binary_columns(r, true).transpose();
                h = HalfspaceForm{A, Vector::Ones(A.rows())};
            }
            Matrix V(r, 2 * r);
            V << Matrix::Identity(r, r), -Matrix::Identity(r, r);
            v = VertexForm{V};
            break;
        }
        case SpecialKind::BInfPlus: {
            Matrix A(2 * r, r);
            A << Matrix::Identity(r, r), -Matrix::Identity(r, r);
            Vector b(2 * r);
            b << Vector::Ones(r), Vector::Zero(r);
            h = HalfspaceForm{A, b};
            if (small_enough) v = VertexForm{detail::binary_columns(r, false)};
            break;
        }
        case SpecialKind::B1Plus: {
            Matrix A(r + 1, r);
            A.row(0).setOnes();
            A.bottomRows(r) = -Matrix::Identity(r, r);
            Vector b = Vector::Zero(r + 1);
            b(0) = 1.0;
            h = HalfspaceForm{A, b};
            Matrix V = Matrix::Zero(r, r + 1);
            V.rightCols(r) = Matrix::Identity(r, r);
            v = VertexForm{V};
            break;
        }
    }
    return Polytope::with_forms(std::move(h), std::move(v), std::nullopt, kind);
}

// The 3-d demo polytope with heterogeneous per-coordinate attributes:
// x1, x2 signed, x3 nonnegative, with sparsity on the (x1,x2) and (x2,x3)
// subvectors.
inline Polytope make_composite_example() {
    FeatureSpec spec;
    spec.dim = 3;
    spec.constraints = {BoxConstraint{0, -1.0, 1.0}, BoxConstraint{1, -1.0, 1.0},
                        BoxConstraint{2, 0.0, 1.0}, L1BallConstraint{{0, 1}, 1.0},
                        L1BallConstraint{{1, 2}, 1.0}};
    HalfspaceForm h = feature_spec_to_halfspaces(spec);
    return Polytope::with_forms(std::move(h), std::nullopt, std::move(spec));
}

// Polar about an interior point d, using the shift convention
// S^{*,d} = (S - d)^*. Facet normals of P - d become the polar's vertices.
inline Polytope polar(const Polytope& p, const Vector& d) {
    const HalfspaceForm& h = p.has_hform() ? p.hform()
                                           : throw PolyfactError("polar: halfspace form required");
    if (d.size() != h.dim()) throw PolyfactError("polar: dimension mismatch");
    Vector slack = h.b - h.A * d;
    if ((slack.array() <= 1e-12).any()) throw PolyfactError("polar: not an interior point");
    Matrix V(h.dim(), h.num_facets());
    for (Index i = 0; i < h.num_facets(); ++i) V.col(i) = h.A.row(i).transpose() / slack(i);
    return Polytope(VertexForm{V});
}

// Exact facet enumeration by brute force over r-subsets of vertices.
// Intended for the desk scales r <= 6, m <= 64.
inline HalfspaceForm vertices_to_halfspaces(const VertexForm& vf) {
    const Index r = vf.dim(), m = vf.num_vertices();
    if (r > 6 || m > 64)
        throw PolyfactError("vertices_to_halfspaces: scale limits exceeded (r <= 6, m <= 64)");
    if (m < r + 1) throw PolyfactError("vertices_to_halfspaces: degenerate vertex set");

    {  // full-dimensionality check
        Matrix D(r, m - 1);
        for (Index j = 1; j < m; ++j) D.col(j - 1) = vf.V.col(j) - vf.V.col(0);
        Eigen::ColPivHouseholderQR<Matrix> qr(D);
        qr.setThreshold(1e-10);
        if (qr.rank() < r)
            throw PolyfactError("vertices_to_halfspaces: vertex set is not full-dimensional");
    }

    const double scale = 1.0 + vf.V.lpNorm<Eigen::Infinity>();
    std::vector<Vector> rows;
    std::vector<double> offs;

    std::vector<Index> idx(static_cast<size_t>(r));
    for (Index i = 0; i < r; ++i) idx[static_cast<size_t>(i)] = i;
    auto next_combination = [&]() {
        Index k = r - 1;
        while (k >= 0 && idx[static_cast<size_t>(k)] == m - r + k) --k;
        if (k < 0) return false;
        ++idx[static_cast<size_t>(k)];
        for (Index j = k + 1; j < r; ++j) idx[static_cast<size_t>(j)] = idx[static_cast<size_t>(j - 1)] + 1;
        return true;
    };

    do {
        // hyperplane through the chosen r vertices
        Matrix D(r - 1, r);
        for (Index j = 1; j < r; ++j)
            D.row(j - 1) = (vf.V.col(idx[static_cast<size_t>(j)]) - vf.V.col(idx[0])).transpose();
        Eigen::JacobiSVD<Matrix> svd(D, Eigen::ComputeFullV);
        if (r > 1 && svd.singularValues()(r - 2) < 1e-10 * scale) continue;  // subset not spanning
        Vector n = svd.matrixV().col(r - 1);
        double b = n.dot(vf.V.col(idx[0]));
        // all vertices weakly on one side, >= r vertices tight
        Vector vals = vf.V.transpose() * n;
        double tol = 1e-9 * scale;
        bool all_le = (vals.array() <= b + tol).all();
        bool all_ge = (vals.array() >= b - tol).all();
        if (!all_le && !all_ge) continue;
        if (all_ge && !all_le) {
            n = -n;
            b = -b;
            vals = -vals;
        }
        Index tight = (vals.array() >= b - tol).count();
        if (tight < r) continue;
        rows.push_back(n);
        offs.push_back(b);
    } while (next_combination());

    if (rows.empty()) throw PolyfactError("vertices_to_halfspaces: no facets found");
    Matrix A(static_cast<Index>(rows.size()), r);
    Vector b(static_cast<Index>(rows.size()));
    for (Index i = 0; i < A.rows(); ++i) {
        A.row(i) = rows[static_cast<size_t>(i)];
        b(i) = offs[static_cast<size_t>(i)];
    }
    return detail::dedup_halfspaces(A, b);
}

// Vertex enumeration by brute force over r-subsets of facets.
inline VertexForm halfspaces_to_vertices(const HalfspaceForm& h) {
    const Index r = h.dim(), f = h.num_facets();
    if (r > 6 || f > 64)
        throw PolyfactError("halfspaces_to_vertices: scale limits exceeded (r <= 6, f <= 64)");
    if (!detail::is_bounded_polyhedron(h.A, h.b))
        throw PolyfactError("halfspaces_to_vertices: unbounded input");

    const double scale = 1.0 + h.b.lpNorm<Eigen::Infinity>();
    std::vector<Vector> verts;

    std::vector<Index> idx(static_cast<size_t>(r));
    for (Index i = 0; i < r; ++i) idx[static_cast<size_t>(i)] = i;
    auto next_combination = [&]() {
        Index k = r - 1;
        while (k >= 0 && idx[static_cast<size_t>(k)] == f - r + k) --k;
        if (k < 0) return false;
        ++idx[static_cast<size_t>(k)];
        for (Index j = k + 1; j < r; ++j) idx[static_cast<size_t>(j)] = idx[static_cast<size_t>(j - 1)] + 1;
        return true;
    };

    do {
        Matrix Asub(r, r);
        Vector bsub(r);
        for (Index j = 0; j < r; ++j) {
            Asub.row(j) = h.A.row(idx[static_cast<size_t>(j)]);
            bsub(j) = h.b(idx[static_cast<size_t>(j)]);
        }
        Eigen::FullPivLU<Matrix> lu(Asub);
        lu.setThreshold(1e-9);
        if (!lu.isInvertible()) continue;
        Vector x = lu.solve(bsub);
        if (((h.b - h.A * x).array() >= -1e-8 * scale).all()) {
            bool dup = false;
            for (const auto& v : verts) {
                if ((v - x).lpNorm<Eigen::Infinity>() <= 1e-8 * scale) {
                    dup = true;
                    break;
                }
            }
            if (!dup) verts.push_back(x);
        }
    } while (next_combination());

    if (verts.empty()) throw PolyfactError("halfspaces_to_vertices: empty polytope");
    Matrix V(r, static_cast<Index>(verts.size()));
    for (Index j = 0; j < V.cols(); ++j) V.col(j) = verts[static_cast<size_t>(j)];
    return VertexForm{V};
}

// Columns of M that are extreme points of conv(M).
inline Matrix extreme_points(const Matrix& M, double tol = kVertexTol) {
    auto idx = detail::extreme_point_indices(M, tol);
    Matrix out(M.rows(), static_cast<Index>(idx.size()));
    for (size_t j = 0; j < idx.size(); ++j) out.col(static_cast<Index>(j)) = M.col(idx[j]);
    return out;
}

inline bool feature_spec_contains(const FeatureSpec& spec, const Vector& x, double tol) {
    for (const auto& c : spec.constraints) {
        if (const auto* box = std::get_if<BoxConstraint>(&c)) {
            if (x(box->index) < box->lo - tol || x(box->index) > box->hi + tol) return false;
        } else if (const auto* l1 = std::get_if<L1BallConstraint>(&c)) {
            double s = 0;
            for (int i : l1->indices) s += std::abs(x(i));
            if (s > l1->radius + tol) return false;
        } else {
            const auto& cap = std::get<SimplexCapConstraint>(c);
            double s = 0;
            for (int i : cap.indices) s += x(i);
            if (s > cap.radius + tol) return false;
        }
    }
    return true;
}

inline bool contains(const Polytope& p, const Vector& x, double tol = 0.0) {
    if (x.size() != p.dim()) throw PolyfactError("contains: dimension mismatch");
    if (p.has_hform()) {
        const auto& h = p.hform();
        return ((h.b - h.A * x).array() >= -tol).all();
    }
    if (p.has_feature_spec()) return feature_spec_contains(p.feature_spec(), x, tol);
    return detail::in_convex_hull(p.vform().V, x, std::max(tol, kVertexTol));
}

// Convenience: make sure both H-form and V-form caches are present,
// converting at small scale when needed.
inline Polytope with_both_forms(const Polytope& p) {
    std::optional<HalfspaceForm> h;
    std::optional<VertexForm> v;
    std::optional<FeatureSpec> f;
    if (p.has_feature_spec()) f = p.feature_spec();
    if (p.has_hform()) h = p.hform();
    else if (f) h = feature_spec_to_halfspaces(*f);
    else h = vertices_to_halfspaces(p.vform());
    if (p.has_vform()) v = p.vform();
    else v = halfspaces_to_vertices(*h);
    return Polytope::with_forms(std::move(h), std::move(v), std::move(f), p.special());
}

} // namespace polyfact

#endif
