#include <catch_amalgamated.hpp>

#include "helpers.hpp"
#include "polyfact/checks.hpp"
#include "polyfact/datagen.hpp"
#include "polyfact/factorizer.hpp"

using namespace polyfact;

TEST_CASE("polar-domain generator") {
    auto pex = make_composite_example();
    SECTION("minimal budget reproduces the polytope's vertices") {
        // with L = facet count the polar hull is the polar itself, so the
        // construction returns exactly the vertex set
        Matrix S = generate_polar_domain(pex, 7, 1);
        auto V = halfspaces_to_vertices(pex.hform());
        REQUIRE(S.cols() == V.num_vertices());
        CHECK(testutil::same_column_set(S, V.V, 1e-6));
    }
    SECTION("L = 30 output is scattered, feasible, and larger than the vertex set") {
        Matrix S = generate_polar_domain(pex, 30, 42);
        auto rep = check_scattered(S, pex);
        CHECK(rep.ss1_holds);
        CHECK(rep.ss2_holds);
        for (Index j = 0; j < S.cols(); ++j) REQUIRE(contains(pex, S.col(j), 1e-8));
        auto V = halfspaces_to_vertices(pex.hform());
        CHECK(S.cols() > V.num_vertices());
    }
    SECTION("cube output hull contains the unit ball") {
        auto p = make_special(SpecialKind::BInf, 2);
        Matrix S = generate_polar_domain(p, 10, 7);
        for (Index j = 0; j < S.cols(); ++j) REQUIRE(contains(p, S.col(j), 1e-8));
        auto rep = check_scattered(S, p);
        CHECK(rep.ss1_holds);
    }
    SECTION("budget below the facet count is rejected") {
        CHECK_THROWS_AS(generate_polar_domain(pex, 3, 1), PolyfactError);
    }
    SECTION("deterministic in the seed") {
        Matrix a = generate_polar_domain(pex, 30, 5);
        Matrix b = generate_polar_domain(pex, 30, 5);
        CHECK((a - b).norm() == 0.0);
        Matrix c = generate_polar_domain(pex, 30, 6);
        CHECK(((a.cols() != c.cols()) || (a - c).norm() > 0.0));
    }
}

TEST_CASE("inflated-ellipsoid generator") {
    SECTION("rho = 1 keeps samples inside the ellipsoid image") {
        auto p = make_special(SpecialKind::B1, 3);
        auto e = mvie_closed_form(SpecialKind::B1, 3);
        Matrix S = generate_inflated_mvie(p, InflationParams{1.0, 200}, 3);
        for (Index j = 0; j < S.cols(); ++j) {
            REQUIRE(contains(p, S.col(j), 1e-9));
            REQUIRE((e.C.inverse() * (S.col(j) - e.g)).norm() <= 1.0 + 1e-9);
        }
    }
    SECTION("moderate inflation leaves cube vertices uncovered") {
        auto p = make_special(SpecialKind::BInf, 2);
        Matrix S = generate_inflated_mvie(p, InflationParams{0.85 * std::sqrt(2.0), 500}, 11);
        double worst = 0;
        for (Index j = 0; j < S.cols(); ++j) {
            REQUIRE(contains(p, S.col(j), 1e-9));
            worst = std::max(worst, S.col(j).lpNorm<1>());
        }
        CHECK(worst < 2.0 - 1e-3);  // corners have l1 norm 2
    }
    SECTION("strong inflation reaches the boundary of b1") {
        auto p = make_special(SpecialKind::B1, 3);
        Matrix S = generate_inflated_mvie(p, InflationParams{std::sqrt(3.0), 10000}, 13);
        double maxl1 = 0;
        for (Index j = 0; j < S.cols(); ++j) maxl1 = std::max(maxl1, S.col(j).lpNorm<1>());
        CHECK(maxl1 >= 1.0 - 1e-3);
        CHECK(maxl1 <= 1.0 + 1e-9);
    }
    SECTION("scattering measure grows with inflation") {
        auto p = make_special(SpecialKind::BInf, 3);
        std::vector<double> rhos = {1.0, 1.5, 2.0, 2.5};
        std::vector<double> means;
        for (double rho : rhos) {
            double acc = 0;
            for (int seed = 0; seed < 20; ++seed)
                acc += detmax_objective(
                    generate_inflated_mvie(p, InflationParams{rho, 80}, 100 + seed));
            means.push_back(acc / 20);
        }
        for (size_t i = 1; i < means.size(); ++i) CHECK(means[i] >= means[i - 1]);
    }
    SECTION("deflation keeps samples strictly inside the ellipsoid") {
        auto p = make_special(SpecialKind::BInf, 2);
        auto e = mvie_closed_form(SpecialKind::BInf, 2);
        Matrix S = generate_inflated_mvie(p, InflationParams{0.5, 100}, 8);
        for (Index j = 0; j < S.cols(); ++j)
            REQUIRE((e.C.inverse() * (S.col(j) - e.g)).norm() <= 0.5 + 1e-9);
    }
    SECTION("nonpositive rho rejected") {
        CHECK_THROWS_AS(generate_inflated_mvie(make_special(SpecialKind::B1, 2),
                                               InflationParams{0.0, 10}, 1),
                        PolyfactError);
        CHECK_THROWS_AS(generate_inflated_mvie(make_special(SpecialKind::B1, 2),
                                               InflationParams{1.0, 0}, 1),
                        PolyfactError);
    }
}

TEST_CASE("mixing matrices") {
    Matrix H = generate_mixing(4, 3, 77);
    CHECK(H.rows() == 4);
    Eigen::JacobiSVD<Matrix> svd(H);
    CHECK(svd.singularValues()(2) > 1e-6);
    CHECK(generate_mixing(20, 10, 78).cols() == 10);
    Matrix sq = generate_mixing(3, 3, 79);
    CHECK(std::abs(sq.determinant()) > 1e-9);
    CHECK_THROWS_AS(generate_mixing(2, 3, 1), PolyfactError);
    CHECK((H - generate_mixing(4, 3, 77)).norm() == 0.0);
}

TEST_CASE("noise injection") {
    std::mt19937_64 rng(55);
    Matrix Y = testutil::random_matrix(40, 50, rng);

    SECTION("infinite snr is the identity") {
        CHECK((add_noise(Y, std::numeric_limits<double>::infinity(), 3) - Y).norm() == 0.0);
    }
    SECTION("0 dB noise has roughly the signal energy") {
        Matrix Yn = add_noise(Y, 0.0, 3);
        double ratio = (Yn - Y).norm() / Y.norm();
        CHECK(ratio >= 0.9);
        CHECK(ratio <= 1.1);
    }
    SECTION("realized snr within half a dB of target") {
        for (double target : {10.0, 20.0, 30.0}) {
            Matrix Yn = add_noise(Y, target, 17);
            double realized = 10.0 * std::log10(Y.squaredNorm() / (Yn - Y).squaredNorm());
            CHECK(std::abs(realized - target) <= 0.5);
        }
    }
    SECTION("deterministic in the seed") {
        CHECK((add_noise(Y, 10, 9) - add_noise(Y, 10, 9)).norm() == 0.0);
    }
}
