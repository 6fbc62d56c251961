#include <catch_amalgamated.hpp>

#include "helpers.hpp"
#include "polyfact/checks.hpp"
#include "polyfact/datagen.hpp"

using namespace polyfact;

namespace {

Polytope hexagon() {
    Matrix V(2, 6);
    for (int k = 0; k < 6; ++k) {
        V(0, k) = std::cos(k * M_PI / 3.0);
        V(1, k) = std::sin(k * M_PI / 3.0);
    }
    return Polytope(VertexForm{V});
}

}  // namespace

TEST_CASE("identifiability of the stock polytopes") {
    for (int r : {2, 3}) {
        for (auto kind :
             {SpecialKind::BInf, SpecialKind::B1, SpecialKind::BInfPlus, SpecialKind::B1Plus}) {
            auto rep = check_identifiable(make_special(kind, r));
            INFO(special_kind_name(kind) << " r=" << r);
            CHECK(rep.identifiable);
            CHECK_FALSE(rep.witness.has_value());
        }
    }
    // the cube's vertex-set automorphisms are exactly the 8 signed
    // permutations in r=2
    auto rep = check_identifiable(make_special(SpecialKind::BInf, 2));
    CHECK(rep.automorphism_count == 8);
}

TEST_CASE("composite example is identifiable") {
    auto p = make_composite_example();
    auto v = halfspaces_to_vertices(p.hform());
    auto rep = check_identifiable(Polytope(v));
    CHECK(rep.identifiable);
}

TEST_CASE("hexagon is not identifiable and the witness is valid") {
    auto p = hexagon();
    auto rep = check_identifiable(p);
    REQUIRE_FALSE(rep.identifiable);
    REQUIRE(rep.witness.has_value());
    const Matrix& A = *rep.witness;
    // witness maps the vertex set onto itself...
    CHECK(detail::maps_vertex_set(A, p.vform().V, 1e-6));
    // ...and is not a signed permutation
    CHECK_FALSE(detail::is_signed_permutation(A));
}

TEST_CASE("identifiability is invariant under vertex relabeling and signed-permutation basis change") {
    std::mt19937_64 rng(17);
    auto p = make_special(SpecialKind::B1Plus, 3);
    Matrix V = p.vform().V;

    // relabel columns
    Matrix Vp = V;
    std::vector<int> order = {3, 0, 2, 1};
    for (size_t j = 0; j < order.size(); ++j) Vp.col(static_cast<Index>(j)) = V.col(order[j]);
    CHECK(check_identifiable(Polytope(VertexForm{Vp})).identifiable);

    // signed permutation change of basis
    Matrix D = Matrix::Zero(3, 3);
    D(0, 1) = -1;
    D(1, 2) = 1;
    D(2, 0) = -1;
    CHECK(check_identifiable(Polytope(VertexForm{(D * V).eval()})).identifiable);

    // the negative case is invariant too
    Matrix D2(2, 2);
    D2 << 0, -1, 1, 0;
    Matrix hexV = hexagon().vform().V;
    CHECK_FALSE(check_identifiable(Polytope(VertexForm{(D2 * hexV).eval()})).identifiable);
}

TEST_CASE("is_signed_permutation") {
    Matrix ok = Matrix::Zero(3, 3);
    ok(0, 2) = -1;
    ok(1, 0) = 1;
    ok(2, 1) = 1;
    CHECK(detail::is_signed_permutation(ok));
    Matrix rot(2, 2);
    double c = std::cos(M_PI / 3), s = std::sin(M_PI / 3);
    rot << c, -s, s, c;
    CHECK_FALSE(detail::is_signed_permutation(rot));
    CHECK_FALSE(detail::is_signed_permutation(0.5 * ok));
}

TEST_CASE("scattering certificate") {
    SECTION("vertex set of b1plus is sufficiently scattered") {
        auto p = make_special(SpecialKind::B1Plus, 2);
        auto rep = check_scattered(p.vform().V, p);
        CHECK(rep.ss1_holds);
        CHECK(rep.ss2_holds);
    }
    SECTION("vertex sets of the identifiable test polytopes are sufficiently scattered") {
        for (auto kind : {SpecialKind::BInf, SpecialKind::B1, SpecialKind::BInfPlus,
                          SpecialKind::B1Plus}) {
            auto p = make_special(kind, 3);
            INFO(special_kind_name(kind));
            auto rep = check_scattered(p.vform().V, p);
            CHECK(rep.ss1_holds);
            CHECK(rep.ss2_holds);
        }
    }
    SECTION("points strictly inside the inscribed ball fail the first condition") {
        std::mt19937_64 rng(23);
        auto p = make_special(SpecialKind::BInf, 3);
        Matrix S(3, 50);
        for (Index j = 0; j < 50; ++j)
            S.col(j) = detail::uniform_in_ball(3, 0.8, rng);
        auto rep = check_scattered(S, p);
        CHECK_FALSE(rep.ss1_holds);
        CHECK_FALSE(rep.ss2_holds);
    }
    SECTION("polar-domain generator output is scattered by construction") {
        auto p = make_composite_example();
        Matrix S = generate_polar_domain(p, 30, 99);
        auto rep = check_scattered(S, p);
        CHECK(rep.ss1_holds);
        CHECK(rep.ss2_holds);
    }
    SECTION("a point outside the polytope is flagged") {
        auto p = make_special(SpecialKind::B1, 2);
        Matrix S = p.vform().V;
        S(0, 0) = 1.5;
        auto rep = check_scattered(S, p);
        CHECK_FALSE(rep.ss1_holds);
        CHECK(rep.violating_points.size() == 1);
    }
}
