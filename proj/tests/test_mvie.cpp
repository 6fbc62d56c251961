#include <catch_amalgamated.hpp>

#include "helpers.hpp"
#include "polyfact/mvie.hpp"

using namespace polyfact;

TEST_CASE("closed-form inscribed ellipsoids") {
    auto e = mvie_closed_form(SpecialKind::BInf, 3);
    CHECK((e.C - Matrix::Identity(3, 3)).norm() == 0.0);
    CHECK(e.g.norm() == 0.0);

    auto e1 = mvie_closed_form(SpecialKind::B1, 4);
    CHECK((e1.C - 0.5 * Matrix::Identity(4, 4)).norm() <= 1e-15);

    auto ep = mvie_closed_form(SpecialKind::BInfPlus, 2);
    CHECK((ep.C - 0.5 * Matrix::Identity(2, 2)).norm() == 0.0);
    CHECK((ep.g - 0.5 * Vector::Ones(2)).norm() == 0.0);

    auto e2 = mvie_closed_form(SpecialKind::B1Plus, 2);
    CHECK(e2.g(0) == Catch::Approx(1.0 / 3.0).margin(1e-12));
    CHECK(e2.C(0, 0) == Catch::Approx(0.32198).margin(1e-5));
    CHECK(e2.C(0, 1) == Catch::Approx(-0.08628).margin(1e-5));
    CHECK(e2.C(1, 1) == Catch::Approx(0.32198).margin(1e-5));
    e2.validate();
}

TEST_CASE("barrier solver matches the closed forms") {
    for (int r : {2, 3, 4}) {
        for (auto kind :
             {SpecialKind::BInf, SpecialKind::B1, SpecialKind::BInfPlus, SpecialKind::B1Plus}) {
            auto p = make_special(kind, r);
            auto ref = mvie_closed_form(kind, r);
            MvieDiagnostics diag;
            auto e = mvie_solve(p.hform(), 1e-9, &diag);
            INFO(special_kind_name(kind) << " r=" << r);
            CHECK((e.C - ref.C).norm() <= 1e-5);
            CHECK((e.g - ref.g).norm() <= 1e-5);
            CHECK(diag.converged);
            // log det C is nondecreasing across barrier stages
            for (size_t s = 1; s < diag.stage_logdet.size(); ++s)
                CHECK(diag.stage_logdet[s] >= diag.stage_logdet[s - 1] - 1e-10);
        }
    }
}

TEST_CASE("composite example center") {
    auto e = mvie(make_composite_example());
    Vector expect(3);
    expect << 0, 0, 0.375;
    CHECK((e.g - expect).norm() <= 1e-3);
}

TEST_CASE("affine covariance of the solver") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> unif(0.1, 2.0);
    for (int trial = 0; trial < 5; ++trial) {
        double alpha = unif(rng);
        Vector d = testutil::random_vector(3, rng);
        auto h = make_special(SpecialKind::B1Plus, 3).hform();
        // alpha*P + d: {x | A((x - d)/alpha) <= b}
        HalfspaceForm ht{h.A, alpha * h.b + h.A * d};
        auto base = mvie_solve(h);
        auto moved = mvie_solve(ht);
        CHECK((moved.C - alpha * base.C).norm() <= 1e-6);
        CHECK((moved.g - (alpha * base.g + d)).norm() <= 1e-6);
    }
}

TEST_CASE("john certificate") {
    SECTION("unit ball in the cube") {
        Ellipsoid e{Matrix::Identity(3, 3), Vector::Zero(3)};
        auto rep = verify_john(e, make_special(SpecialKind::BInf, 3).hform());
        CHECK(rep.contact_count == 6);
        CHECK(rep.is_plausible_mvie);
    }
    SECTION("strictly interior ellipsoid is rejected") {
        Ellipsoid e{0.9 * Matrix::Identity(3, 3), Vector::Zero(3)};
        auto rep = verify_john(e, make_special(SpecialKind::BInf, 3).hform());
        CHECK(rep.contact_count == 0);
        CHECK_FALSE(rep.is_plausible_mvie);
    }
    SECTION("infeasible ellipsoid errors") {
        Ellipsoid e{1.5 * Matrix::Identity(3, 3), Vector::Zero(3)};
        CHECK_THROWS_AS(verify_john(e, make_special(SpecialKind::BInf, 3).hform()), PolyfactError);
    }
    SECTION("solver output self-certifies on the composite example") {
        auto p = make_composite_example();
        auto e = mvie(p);
        auto rep = verify_john(e, p.hform());
        CHECK(rep.contact_count >= 3);
        CHECK(rep.is_plausible_mvie);
    }
}

TEST_CASE("ellipsoid polar") {
    auto id = ellipsoid_polar(Ellipsoid{Matrix::Identity(2, 2), Vector::Zero(2)});
    CHECK((id.C - Matrix::Identity(2, 2)).norm() <= 1e-12);

    double r = 3;
    auto e = ellipsoid_polar(Ellipsoid{Matrix::Identity(3, 3) / std::sqrt(r), Vector::Zero(3)});
    CHECK((e.C - std::sqrt(r) * Matrix::Identity(3, 3)).norm() <= 1e-12);

    auto ep = ellipsoid_polar(Ellipsoid{0.5 * Matrix::Identity(3, 3), 0.5 * Vector::Ones(3)});
    CHECK((ep.C - 2.0 * Matrix::Identity(3, 3)).norm() <= 1e-12);
    CHECK(ep.g.norm() == 0.0);
}

TEST_CASE("ellipsoid validation") {
    Matrix bad(2, 2);
    bad << 1, 0.5, 0.4, 1;  // asymmetric
    CHECK_THROWS_AS((Ellipsoid{bad, Vector::Zero(2)}.validate()), PolyfactError);
    Matrix neg = -Matrix::Identity(2, 2);
    CHECK_THROWS_AS((Ellipsoid{neg, Vector::Zero(2)}.validate()), PolyfactError);
}
