#include "doctest.h"

#include "eigqmc/cubature.hpp"
#include "eigqmc/problems.hpp"

#include <cmath>
#include <numbers>
#include <set>
#include <vector>

using namespace eigqmc;
using namespace eigqmc::cubature;

namespace {

EstimatorConfig base_config(int s, int k, Method method, int level, double K = 0.5) {
    EstimatorConfig cfg;
    cfg.method = method;
    cfg.level = level;
    cfg.shift_count = 2;
    cfg.seed = 11;
    cfg.threads = 1;
    cfg.inner_z.components.assign(static_cast<std::size_t>(s), 1);
    cfg.outer_z.components.assign(static_cast<std::size_t>(k), 1);
    cfg.data_box = qmc::Box::centered(static_cast<std::size_t>(k), 0.0, K);
    return cfg;
}

// Counts every call and every distinct (theta, y) pair; nested rules repeat
// coordinates bitwise, so exact keys capture reuse.
class CountingIntegrand : public NestedIntegrand {
  public:
    CountingIntegrand(int s, int k) : s_(s), k_(k) {}
    int theta_dimension() const override { return s_; }
    int data_dimension() const override { return k_; }
    double log_f(std::size_t ti, std::span<const double> y) const override {
        ++calls;
        std::vector<double> key(theta(ti).begin(), theta(ti).end());
        key.insert(key.end(), y.begin(), y.end());
        pairs.insert(key);
        double v = 0.0;
        for (double t : theta(ti)) v += 0.1 * t;
        for (double u : y) v += 0.05 * u;
        return v;
    }
    mutable std::uint64_t calls = 0;
    mutable std::set<std::vector<double>> pairs;

  private:
    int s_, k_;
};

}  // namespace

TEST_SUITE("cubature") {

TEST_CASE("entropy kernel point values") {
    CHECK(g_xlogx(1.0) == 0.0);
    CHECK(g_xlogx(std::numbers::e) == doctest::Approx(std::numbers::e).epsilon(1e-15));
    CHECK(g_xlogx(0.0) == 0.0);
    CHECK(g_xlogx(0.5) == doctest::Approx(0.5 * std::log(0.5)).epsilon(1e-15));
    CHECK_THROWS(g_xlogx(-0.1));
}

TEST_CASE("inner average of a constant is exact") {
    auto cfg = base_config(2, 1, Method::Ftp, 3);
    problems::CallableIntegrand f(2, 1, [](auto, auto) { return std::log(2.75); });
    const std::vector<double> shift{0.0, 0.0};
    const std::vector<double> y{0.1};
    for (int level = 0; level <= 3; ++level)
        CHECK(inner_average(cfg, f, level, shift, y) == doctest::Approx(2.75).epsilon(1e-14));
}

TEST_CASE("inner average visits the recentred grid") {
    // f(theta) = 1 + theta over the unshifted rule: mean = 1 - 1/(2n)
    auto cfg = base_config(1, 1, Method::Ftp, 2);
    problems::CallableIntegrand f(1, 1,
                                  [](std::span<const double> t, auto) { return std::log1p(t[0]); });
    const std::vector<double> shift{0.0};
    const std::vector<double> y{0.0};
    for (int level = 0; level <= 4; ++level) {
        const double n = std::pow(2.0, level + cfg.inner_offset);
        CHECK(inner_average(cfg, f, level, shift, y) ==
              doctest::Approx(1.0 - 0.5 / n).epsilon(1e-13));
    }
}

TEST_CASE("inner average converges on a smooth integrand") {
    auto cfg = base_config(1, 1, Method::Ftp, 8);
    problems::CallableIntegrand f(1, 1,
                                  [](std::span<const double> t, auto) { return t[0]; });
    const std::vector<double> shift{0.0};
    const std::vector<double> y{0.0};
    const double exact = 2.0 * std::sinh(0.5);
    double prev = 1e300;
    for (int level : {2, 4, 6, 8}) {
        const double err = std::abs(inner_average(cfg, f, level, shift, y) - exact);
        CHECK(err < prev);
        prev = err;
    }
    CHECK(prev < 2e-3);
}

TEST_CASE("inner average rejects vanishing integrands") {
    auto cfg = base_config(1, 1, Method::Ftp, 1);
    problems::CallableIntegrand f(1, 1, [](auto, auto) { return -1e6; });
    const std::vector<double> shift{0.0};
    const std::vector<double> y{0.0};
    CHECK_THROWS(inner_average(cfg, f, 1, shift, y));
}

TEST_CASE("outer lattice weights carry the box volume") {
    auto cfg = base_config(1, 2, Method::Ftp, 3);
    cfg.data_box = qmc::Box::centered(2, 0.0, 0.5);
    const std::vector<double> shift{0.0, 0.0};
    for (int level = 0; level <= 3; ++level) {
        const auto nodes = outer_rule_nodes(cfg, level, shift, false);
        double sum = 0.0;
        for (double w : nodes.weights) sum += w;
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-13));
    }

    cfg.data_box = qmc::Box::centered(1, 0.0, 2.0);
    cfg.outer_z.components = {1};
    const std::vector<double> shift1{0.0};
    const auto nodes = outer_rule_nodes(cfg, 2, shift1, false);
    double sum = 0.0;
    for (double w : nodes.weights) sum += w;
    CHECK(sum == doctest::Approx(4.0).epsilon(1e-13));
    CHECK(nodes.count == 8);  // 2^{level + offset}
}

TEST_CASE("outer difference weights annihilate constants") {
    auto cfg = base_config(1, 1, Method::Stp, 3);
    const std::vector<double> shift{0.25};
    for (int level = 1; level <= 3; ++level) {
        const auto nodes = outer_rule_nodes(cfg, level, shift, true);
        double sum = 0.0;
        for (double w : nodes.weights) sum += w;
        CHECK(sum == doctest::Approx(0.0).epsilon(1e-13));
        CHECK(nodes.fresh == nodes.count / 2);
    }
    const auto base = outer_rule_nodes(cfg, 0, shift, true);
    double sum0 = 0.0;
    for (double w : base.weights) sum0 += w;
    CHECK(sum0 == doctest::Approx(cfg.data_box.volume()).epsilon(1e-13));
}

TEST_CASE("sparse trapezoid reduces to the composite rule in one dimension") {
    for (int q = 1; q <= 5; ++q) {
        const auto rule = smolyak_trapezoid(1, q);
        const std::size_t n = (std::size_t{1} << q) + 1;
        CHECK(rule.count == n);
        double wsum = 0.0, quad = 0.0;
        for (std::size_t i = 0; i < rule.count; ++i) {
            wsum += rule.weights[i];
            const double y = rule.coords[i];
            quad += rule.weights[i] * y * y;
        }
        CHECK(wsum == doctest::Approx(1.0).epsilon(1e-13));
        // composite trapezoid of y^2 on [0,1]: 1/3 + h^2/6
        const double h = 1.0 / static_cast<double>(n - 1);
        CHECK(quad == doctest::Approx(1.0 / 3.0 + h * h / 6.0).epsilon(1e-12));
    }
    const auto point = smolyak_trapezoid(1, 0);
    CHECK(point.count == 1);
    CHECK(point.coords[0] == doctest::Approx(0.5));
    CHECK(point.weights[0] == doctest::Approx(1.0));
}

TEST_CASE("sparse trapezoid weights always sum to one") {
    for (int k = 1; k <= 3; ++k) {
        for (int q = 0; q <= 5; ++q) {
            const auto rule = smolyak_trapezoid(k, q);
            CHECK(rule.dim == k);
            double wsum = 0.0;
            for (double w : rule.weights) wsum += w;
            CHECK(wsum == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("full tensor estimate is exact on constants") {
    for (int level = 0; level <= 3; ++level) {
        auto cfg = base_config(2, 2, Method::Ftp, level);
        problems::CallableIntegrand f(2, 2, [](auto, auto) { return std::log(1.3); }, 2.0);
        const auto result = estimate(cfg, f);
        const double expected = cfg.data_box.volume() * g_xlogx(2.0 * 1.3);
        CHECK(result.mean == doctest::Approx(expected).epsilon(1e-12));
        for (double v : result.per_shift) CHECK(v == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("sparse estimate is exact on constants") {
    for (int level = 0; level <= 3; ++level) {
        auto cfg = base_config(1, 1, Method::Stp, level);
        problems::CallableIntegrand f(1, 1, [](auto, auto) { return std::log(0.8); });
        const auto result = estimate(cfg, f);
        const double expected = cfg.data_box.volume() * g_xlogx(0.8);
        CHECK(result.mean == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("sparse estimate with the trapezoid outer family is exact on constants") {
    for (int level = 0; level <= 3; ++level) {
        auto cfg = base_config(1, 2, Method::Stp, level);
        cfg.outer_family = OuterFamily::SmolyakTrapezoid;
        cfg.shift_count = 1;
        problems::CallableIntegrand f(1, 2, [](auto, auto) { return std::log(1.7); });
        const auto result = estimate(cfg, f);
        const double expected = cfg.data_box.volume() * g_xlogx(1.7);
        CHECK(result.mean == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("full tensor estimate converges on a separable integrand") {
    // f(theta, y) = e^theta: the outer integrand is constant in y, so the
    // double integral over the unit-volume box equals g(2 sinh 1/2).
    const double exact = g_xlogx(2.0 * std::sinh(0.5));
    auto run = [&](int level) {
        auto cfg = base_config(1, 1, Method::Ftp, level);
        cfg.shift_count = 8;
        problems::CallableIntegrand f(1, 1,
                                      [](std::span<const double> t, auto) { return t[0]; });
        return estimate(cfg, f).mean;
    };
    const double err2 = std::abs(run(2) - exact);
    const double err8 = std::abs(run(8) - exact);
    CHECK(err8 < err2);
    CHECK(err8 < 5e-3);
}

TEST_CASE("sparse single-sum path agrees with the full difference triangle") {
    for (int level = 0; level <= 4; ++level) {
        auto cfg = base_config(1, 1, Method::Stp, level);
        cfg.shift_count = 3;
        problems::CallableIntegrand f(
            1, 1, [](std::span<const double> t, std::span<const double> y) {
                return 0.3 * t[0] + 0.2 * y[0] + 0.1 * t[0] * y[0];
            });
        const auto fast = estimate(cfg, f);
        const auto slow = stp_full_triangle(cfg, f);
        CHECK(fast.mean == doctest::Approx(slow.mean).epsilon(1e-12));
        REQUIRE(fast.per_shift.size() == slow.per_shift.size());
        for (std::size_t r = 0; r < fast.per_shift.size(); ++r)
            CHECK(fast.per_shift[r] == doctest::Approx(slow.per_shift[r]).epsilon(1e-12));
    }
}

TEST_CASE("level balance exponent reshapes the sparse sum") {
    auto cfg = base_config(1, 1, Method::Stp, 4);
    cfg.sigma = 2.0;
    problems::CallableIntegrand f(1, 1, [](std::span<const double> t, auto) {
        return 0.25 * t[0];
    });
    const auto fast = estimate(cfg, f);
    const auto slow = stp_full_triangle(cfg, f);
    CHECK(fast.mean == doctest::Approx(slow.mean).epsilon(1e-12));

    cfg.sigma = 0.5;  // sigma (L - sigma l1) lands off the integer grid
    CHECK_THROWS(estimate(cfg, f));
}

TEST_CASE("node budgets match an instrumented run") {
    // full tensor: every (theta, y) pair is distinct
    {
        auto cfg = base_config(1, 1, Method::Ftp, 2);
        CountingIntegrand f(1, 1);
        estimate(cfg, f);
        const auto budget = node_budget(cfg);
        CHECK(f.calls == budget.gross);
        CHECK(f.pairs.size() == budget.net);
        CHECK(budget.gross == budget.net);
        // n_inner = n_outer = 2^{2+1} = 8, two shifts
        CHECK(budget.gross == 128);
    }
    // sparse lattice: lower levels reuse nested nodes
    {
        auto cfg = base_config(1, 1, Method::Stp, 3);
        CountingIntegrand f(1, 1);
        estimate(cfg, f);
        const auto budget = node_budget(cfg);
        CHECK(f.calls == budget.gross);
        CHECK(f.pairs.size() == budget.net);
        CHECK(budget.net < budget.gross);
    }
    // sparse with the trapezoid outer family
    {
        auto cfg = base_config(1, 2, Method::Stp, 2);
        cfg.outer_family = OuterFamily::SmolyakTrapezoid;
        cfg.shift_count = 1;
        CountingIntegrand f(1, 2);
        estimate(cfg, f);
        const auto budget = node_budget(cfg);
        CHECK(f.calls == budget.gross);
        CHECK(f.pairs.size() == budget.net);
    }
}

TEST_CASE("trapezoid node counts match the direct enumeration") {
    for (int q = 0; q <= 6; ++q) {
        const auto rule = smolyak_trapezoid(2, q);
        std::set<std::pair<long, long>> nodes;
        const long res = 1L << 10;
        for (std::size_t i = 0; i < rule.count; ++i)
            nodes.insert({std::lround(rule.coords[2 * i] * res),
                          std::lround(rule.coords[2 * i + 1] * res)});
        CHECK(nodes.size() == rule.count);  // deduplicated
    }
}

TEST_CASE("estimates are reproducible for a fixed seed") {
    auto cfg = base_config(2, 1, Method::Ftp, 3);
    cfg.shift_count = 4;
    problems::CallableIntegrand f(2, 1, [](std::span<const double> t, std::span<const double> y) {
        return 0.2 * t[0] - 0.1 * t[1] + 0.3 * y[0];
    });
    const auto a = estimate(cfg, f);
    const auto b = estimate(cfg, f);
    CHECK(a.mean == b.mean);
    CHECK(a.per_shift == b.per_shift);

    cfg.seed = 12;
    const auto c = estimate(cfg, f);
    CHECK(a.mean != c.mean);
}

TEST_CASE("derived shifts are seed-deterministic and dimension-correct") {
    auto cfg = base_config(3, 2, Method::Ftp, 1);
    cfg.shift_count = 5;
    const auto outer = derive_outer_shifts(cfg);
    const auto inner = derive_inner_shifts(cfg);
    REQUIRE(outer.size() == 5);
    REQUIRE(inner.size() == 5);
    CHECK(outer[0].size() == 2);
    CHECK(inner[0].size() == 3);
    CHECK(outer == derive_outer_shifts(cfg));
    CHECK(inner == derive_inner_shifts(cfg));
    CHECK(outer[0] != inner[0]);  // independent streams
}

TEST_CASE("configuration validation") {
    problems::CallableIntegrand f(1, 1, [](auto, auto) { return 0.0; });

    auto cfg = base_config(1, 1, Method::Ftp, -1);
    CHECK_THROWS(estimate(cfg, f));

    cfg = base_config(1, 1, Method::Ftp, 1);
    cfg.shift_count = 0;
    CHECK_THROWS(estimate(cfg, f));

    cfg = base_config(1, 1, Method::Stp, 1);
    cfg.sigma = 0.0;
    CHECK_THROWS(estimate(cfg, f));

    cfg = base_config(1, 1, Method::Ftp, 1);
    cfg.outer_z.components.clear();
    CHECK_THROWS(estimate(cfg, f));

    // box dimension must match the integrand's data dimension
    cfg = base_config(1, 1, Method::Ftp, 1);
    cfg.data_box = qmc::Box::centered(2, 0.0, 0.5);
    CHECK_THROWS(estimate(cfg, f));
}

}  // TEST_SUITE
