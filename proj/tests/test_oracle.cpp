#include "doctest.h"

#include "eigqmc/cubature.hpp"
#include "eigqmc/oracle.hpp"

#include <cmath>
#include <numbers>

using namespace eigqmc;
using namespace eigqmc::oracle;

TEST_SUITE("oracle") {

TEST_CASE("gauss-legendre nodes and weights") {
    const auto r1 = gauss_legendre(1);
    REQUIRE(r1.nodes.size() == 1);
    CHECK(r1.nodes[0] == doctest::Approx(0.0));
    CHECK(r1.weights[0] == doctest::Approx(2.0));

    const auto r2 = gauss_legendre(2);
    CHECK(r2.nodes[0] == doctest::Approx(-1.0 / std::sqrt(3.0)).epsilon(1e-14));
    CHECK(r2.nodes[1] == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-14));
    CHECK(r2.weights[0] == doctest::Approx(1.0).epsilon(1e-14));

    const auto r7 = gauss_legendre(7);
    double wsum = 0.0;
    for (double w : r7.weights) wsum += w;
    CHECK(wsum == doctest::Approx(2.0).epsilon(1e-13));
    for (std::size_t i = 0; i < 7; ++i)
        CHECK(r7.nodes[i] == doctest::Approx(-r7.nodes[6 - i]).epsilon(1e-13));
    for (std::size_t i = 1; i < 7; ++i) CHECK(r7.nodes[i] > r7.nodes[i - 1]);

    CHECK_THROWS(gauss_legendre(0));
    CHECK_THROWS(gauss_legendre(513));
}

TEST_CASE("gauss-legendre is exact to the polynomial degree bound") {
    // a p-point rule integrates monomials up to degree 2p-1 exactly
    for (int p = 2; p <= 6; ++p) {
        const auto rule = gauss_legendre(p);
        for (int d = 0; d <= 2 * p - 1; ++d) {
            double quad = 0.0;
            for (std::size_t i = 0; i < rule.nodes.size(); ++i)
                quad += rule.weights[i] * std::pow(rule.nodes[i], d);
            const double exact = (d % 2 == 1) ? 0.0 : 2.0 / (d + 1);
            CHECK(quad == doctest::Approx(exact).epsilon(1e-12));
        }
    }
}

TEST_CASE("dense reference integral on constants") {
    DenseQuadratureSpec spec;
    spec.s = 1;
    spec.k = 1;
    spec.points_per_dim = 8;
    spec.theta_lower = {-0.5};
    spec.theta_upper = {0.5};
    spec.y_lower = {-2.0};
    spec.y_upper = {2.0};
    const double c = 1.3, scale = 2.0;
    const double val = dense_double_integral(spec, [&](auto&, auto&) { return c; }, scale);
    const double expected = 4.0 * (scale * c) * std::log(scale * c);
    CHECK(val == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("dense reference integral reproduces the frozen toy value") {
    // unit-noise linear model: f = exp(-(y - theta)^2 / 2), scale (2 pi)^{-1/2}
    DenseQuadratureSpec spec;
    spec.s = 1;
    spec.k = 1;
    spec.points_per_dim = 16;
    spec.theta_lower = {-0.5};
    spec.theta_upper = {0.5};
    spec.y_lower = {-2.0};
    spec.y_upper = {2.0};
    const double scale = 1.0 / std::sqrt(2.0 * std::numbers::pi);
    const double val = dense_double_integral(
        spec,
        [](const std::vector<double>& theta, const std::vector<double>& y) {
            const double r = y[0] - theta[0];
            return std::exp(-0.5 * r * r);
        },
        scale);
    CHECK(val == doctest::Approx(-1.2585823660061577).epsilon(1e-7));

    // doubling the starting order moves the answer by less than the
    // convergence tolerance it was accepted under
    spec.points_per_dim = 32;
    const double val2 = dense_double_integral(
        spec,
        [](const std::vector<double>& theta, const std::vector<double>& y) {
            const double r = y[0] - theta[0];
            return std::exp(-0.5 * r * r);
        },
        scale);
    CHECK(std::abs(val - val2) < 1e-8);
}

TEST_CASE("dense reference integral input guards") {
    DenseQuadratureSpec spec;
    spec.s = 3;  // too many parameter dimensions
    spec.k = 1;
    spec.theta_lower = {-0.5, -0.5, -0.5};
    spec.theta_upper = {0.5, 0.5, 0.5};
    spec.y_lower = {-1.0};
    spec.y_upper = {1.0};
    CHECK_THROWS(dense_double_integral(spec, [](auto&, auto&) { return 1.0; }, 1.0));

    spec.s = 1;
    spec.theta_lower = {-0.5};
    spec.theta_upper = {0.5};
    spec.y_lower = {1.0};
    spec.y_upper = {-1.0};  // empty box
    CHECK_THROWS(dense_double_integral(spec, [](auto&, auto&) { return 1.0; }, 1.0));
}

TEST_CASE("recursion and closed form agree on small multi-indices") {
    const auto report = verify_lah_sharpness(4, 3);
    CHECK(report.pairs_checked > 100);
    CHECK(report.ok());
    CHECK(report.mismatches.empty());

    CHECK_THROWS(verify_lah_sharpness(8, 2));
}

TEST_CASE("sparse node counts by direct construction") {
    CHECK(sparse_node_count(1, 0) == 1);
    for (int m = 1; m <= 10; ++m)
        CHECK(sparse_node_count(1, m) == (std::uint64_t{1} << m) + 1);

    // independent count agrees with the rule the engine builds
    for (int q = 0; q <= 6; ++q)
        CHECK(sparse_node_count(2, q) == cubature::smolyak_trapezoid(2, q).count);
    for (int q = 0; q <= 4; ++q)
        CHECK(sparse_node_count(3, q) == cubature::smolyak_trapezoid(3, q).count);

    for (std::size_t k = 1; k <= 4; ++k)
        for (int lvl = 1; lvl <= 6; ++lvl)
            CHECK(sparse_node_count(k, lvl) > sparse_node_count(k, lvl - 1));

    CHECK_THROWS(sparse_node_count(5, 1));
    CHECK_THROWS(sparse_node_count(1, 13));
}

TEST_CASE("combination coefficients sum to one over the simplex") {
    for (std::size_t k = 1; k <= 4; ++k)
        for (int lvl = 0; lvl <= 10; ++lvl) CHECK(combination_coefficient_sum(k, lvl) == 1);
    CHECK_THROWS(combination_coefficient_sum(0, 1));
    CHECK_THROWS(combination_coefficient_sum(2, -1));
}

}  // TEST_SUITE
