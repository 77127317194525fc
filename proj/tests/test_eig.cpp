#include "doctest.h"

#include "eigqmc/eig.hpp"
#include "eigqmc/problems.hpp"

#include <cmath>
#include <memory>
#include <sstream>
#include <vector>

using namespace eigqmc;
using namespace eigqmc::eig;

namespace {

cubature::EstimatorConfig toy_config(cubature::Method method, int level, int shifts = 2) {
    cubature::EstimatorConfig cfg;
    cfg.method = method;
    cfg.level = level;
    cfg.shift_count = shifts;
    cfg.seed = 5;
    cfg.threads = 1;
    cfg.inner_z.components = {1};
    cfg.outer_z.components = {1};
    cfg.data_box = qmc::Box::centered(1, 0.0, 0.5);
    return cfg;
}

std::unique_ptr<cubature::NestedIntegrand> constant_integrand(double value) {
    return std::make_unique<problems::CallableIntegrand>(
        1, 1, [value](auto, auto) { return std::log(value); });
}

}  // namespace

TEST_SUITE("eig") {

TEST_CASE("design enumeration is lexicographic") {
    const auto designs = enumerate_designs(9, 3);
    REQUIRE(designs.size() == 84);
    CHECK(designs.front() == std::vector<std::size_t>{0, 1, 2});
    CHECK(designs[1] == std::vector<std::size_t>{0, 1, 3});
    CHECK(designs.back() == std::vector<std::size_t>{6, 7, 8});
    for (std::size_t i = 1; i < designs.size(); ++i) CHECK(designs[i - 1] < designs[i]);

    CHECK(enumerate_designs(3, 3) == std::vector<std::vector<std::size_t>>{{0, 1, 2}});
    CHECK(enumerate_designs(4, 1).size() == 4);
    CHECK_THROWS(enumerate_designs(2, 3));
    CHECK_THROWS(enumerate_designs(5, 0));
}

TEST_CASE("information gain assembles from the integral estimate") {
    auto cfg = toy_config(cubature::Method::Ftp, 2);
    auto f = constant_integrand(1.0);  // g(1) = 0, so i_k = 0 exactly
    const auto est = eig_for_design(cfg, *f, 2.5, {0});
    CHECK(est.i_k == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(est.eig == doctest::Approx(1.5).epsilon(1e-14));
    CHECK(est.design == std::vector<std::size_t>{0});
    // arithmetic identity between the stored fields
    CHECK(est.eig + 1.0 - 2.5 == doctest::Approx(-est.i_k));

    auto f2 = constant_integrand(0.5);
    const auto est2 = eig_for_design(cfg, *f2, 2.5, {1});
    CHECK(est2.i_k == doctest::Approx(cubature::g_xlogx(0.5)).epsilon(1e-13));
}

TEST_CASE("design search minimizes the integral estimate") {
    auto cfg = toy_config(cubature::Method::Ftp, 2);
    const std::vector<std::vector<std::size_t>> designs{{0}, {1}, {2}};
    const double constants[] = {std::exp(1.0), 1.0, 0.5};
    auto factory = [&](const std::vector<std::size_t>& d) {
        return constant_integrand(constants[d[0]]);
    };
    const auto result = design_search(cfg, 2.5, designs, factory);
    REQUIRE(result.estimates.size() == 3);
    // g(e) = e, g(1) = 0, g(0.5) < 0: the third design wins
    CHECK(result.best_index == 2);
    CHECK(result.estimates[2].eig > result.estimates[0].eig);
}

TEST_CASE("design search ties resolve to the earliest design") {
    auto cfg = toy_config(cubature::Method::Ftp, 1);
    const std::vector<std::vector<std::size_t>> designs{{0}, {1}, {2}};
    const double constants[] = {0.5, 0.5, 2.0};
    auto factory = [&](const std::vector<std::size_t>& d) {
        return constant_integrand(constants[d[0]]);
    };
    const auto result = design_search(cfg, 1.0, designs, factory);
    CHECK(result.best_index == 0);
    CHECK_THROWS(design_search(cfg, 1.0, {}, factory));
}

TEST_CASE("slope fit recovers a synthetic power law") {
    const std::vector<std::uint64_t> budgets{100, 1000, 10000, 100000};
    std::vector<double> errors;
    for (auto n : budgets) errors.push_back(50.0 / static_cast<double>(n));
    bool valid = false;
    const double slope = fit_loglog_slope(budgets, errors, 3, valid);
    CHECK(valid);
    CHECK(slope == doctest::Approx(-1.0).epsilon(1e-12));

    // window wider than the data clamps to everything
    const double slope_all = fit_loglog_slope(budgets, errors, 99, valid);
    CHECK(valid);
    CHECK(slope_all == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("slope fit flags degenerate inputs") {
    bool valid = true;
    const std::vector<std::uint64_t> budgets{100, 1000, 10000};
    const std::vector<double> with_zero{0.1, 0.0, 0.001};
    const double s1 = fit_loglog_slope(budgets, with_zero, 3, valid);
    CHECK_FALSE(valid);
    CHECK(std::isnan(s1));

    const std::vector<std::uint64_t> one{100};
    const std::vector<double> one_err{0.1};
    valid = true;
    const double s2 = fit_loglog_slope(one, one_err, 3, valid);
    CHECK_FALSE(valid);
    CHECK(s2 == 0.0);

    const std::vector<double> short_err{0.1, 0.01};
    CHECK_THROWS(fit_loglog_slope(budgets, short_err, 2, valid));
}

TEST_CASE("rms convergence study on an exact integrand has zero errors") {
    auto cfg = toy_config(cubature::Method::Ftp, 0);
    auto f = constant_integrand(2.0);
    const auto study = convergence_study(cfg, *f, {0, 1, 2}, ErrorMode::Rms, std::nullopt, 3);
    REQUIRE(study.rows.size() == 3);
    for (const auto& row : study.rows) CHECK(row.error == doctest::Approx(0.0).epsilon(1e-13));
    CHECK_FALSE(study.slope_valid);
    CHECK(study.reference == doctest::Approx(cubature::g_xlogx(2.0)).epsilon(1e-13));
    for (std::size_t i = 1; i < study.rows.size(); ++i)
        CHECK(study.rows[i].budget.gross > study.rows[i - 1].budget.gross);
}

TEST_CASE("rms convergence study tracks a decaying error") {
    auto cfg = toy_config(cubature::Method::Ftp, 0, 8);
    problems::CallableIntegrand f(1, 1,
                                  [](std::span<const double> t, auto) { return t[0]; });
    const auto study =
        convergence_study(cfg, f, {0, 1, 2, 3, 4, 5, 6}, ErrorMode::Rms, std::nullopt, 3);
    REQUIRE(study.rows.size() == 7);
    CHECK(study.rows[0].error > study.rows.back().error);
    CHECK(study.slope_valid);
    // error decays like 1/n_inner while the budget grows like n^2 R
    CHECK(study.slope < -0.3);
    CHECK(study.slope > -0.9);
}

TEST_CASE("absolute-error study compares against a deeper reference") {
    // A theta-constant integrand makes every inner average exact, so with the
    // deterministic trapezoid outer family the estimate collapses to the
    // composite trapezoid value of g(f(y)) and the gap to a deeper reference
    // shrinks like the mesh squared. A random-shift toy would not do here:
    // its single-shift error oscillates in sign and size from level to level.
    auto cfg = toy_config(cubature::Method::Stp, 0, 1);
    cfg.outer_family = cubature::OuterFamily::SmolyakTrapezoid;
    problems::CallableIntegrand f(
        1, 1, [](auto, std::span<const double> y) { return y[0] * y[0]; });
    const auto study = convergence_study(cfg, f, {0, 1, 2, 3, 4}, ErrorMode::Abs, 7, 3);
    CHECK(study.reference_level == 7);
    CHECK(study.mode == ErrorMode::Abs);
    REQUIRE(study.rows.size() == 5);
    for (const auto& row : study.rows) CHECK(row.per_shift.size() == 1);
    for (std::size_t i = 1; i < study.rows.size(); ++i)
        CHECK(study.rows[i].error < study.rows[i - 1].error);
    CHECK(study.slope_valid);
    CHECK(study.slope < -1.2);
    CHECK(study.slope > -2.6);

    // reference and per-row errors restate independent estimate() calls
    auto probe = cfg;
    probe.level = 7;
    const auto ref = cubature::estimate(probe, f);
    CHECK(study.reference == ref.mean);
    for (const auto& row : study.rows) {
        probe.level = row.level;
        const auto est = cubature::estimate(probe, f);
        CHECK(row.estimate == est.mean);
        CHECK(row.error == std::fabs(est.mean - ref.mean));
    }

    // default reference level sits two above the sweep
    const auto study2 = convergence_study(cfg, f, {0, 1, 2}, ErrorMode::Abs, std::nullopt, 3);
    CHECK(study2.reference_level == 4);

    // absolute mode insists on a single shift
    auto multi = toy_config(cubature::Method::Stp, 0, 4);
    CHECK_THROWS(convergence_study(multi, f, {0, 1, 2}, ErrorMode::Abs, std::nullopt, 3));
    // reference must lie beyond the sweep
    CHECK_THROWS(convergence_study(cfg, f, {0, 1, 2}, ErrorMode::Abs, 2, 3));
    // levels must increase
    CHECK_THROWS(convergence_study(cfg, f, {2, 1}, ErrorMode::Abs, std::nullopt, 3));
}

TEST_CASE("csv output is deterministic and carries the schema") {
    CsvMeta meta;
    meta.config_hash = "00000000deadbeef";
    meta.seed = 17;
    meta.version = "1.0.0";
    meta.config_lines = {"method=ftp", "levels=0..3"};
    meta.extra_comments = {"fitted_slope: -0.5"};

    CsvRow row;
    row.design_id = "0-4-8";
    row.sensors = "0.25:0.25;0.5:0.5;0.75:0.75";
    row.method = "ftp";
    row.level = 3;
    row.n_inner = 16;
    row.n_outer = 16;
    row.shift_count = 8;
    row.n_gross = 2048;
    row.n_net = 2048;
    row.i_k = 2.25;
    row.eig = 0.9;
    row.rms_error = 0.001;

    CsvRow bare = row;
    bare.level = 4;
    bare.rms_error.reset();

    std::ostringstream a, b;
    write_csv(a, meta, {row, bare});
    write_csv(b, meta, {row, bare});
    CHECK(a.str() == b.str());

    const std::string text = a.str();
    CHECK(text.find("# eigqmc-csv v1\n") == 0);
    CHECK(text.find("# config_hash: 00000000deadbeef\n") != std::string::npos);
    CHECK(text.find("# seed: 17\n") != std::string::npos);
    CHECK(text.find("# cfg method=ftp\n") != std::string::npos);
    CHECK(text.find("# fitted_slope: -0.5\n") != std::string::npos);
    CHECK(text.find("design_id,sensors,method,level,n_inner,n_outer,R,N_gross,N_net,"
                    "i_k_estimate,eig,rms_error,abs_error,runtime_ms\n") != std::string::npos);
    CHECK(text.find("0-4-8,0.25:0.25;0.5:0.5;0.75:0.75,ftp,3,16,16,8,2048,2048,2.25,0.90000000"
                    "000000002,0.001,,0\n") != std::string::npos);
    // optional error fields stay empty rather than printing zeros
    CHECK(text.find(",ftp,4,") != std::string::npos);
    CHECK(text.find("2.25,0.90000000000000002,,,0\n") != std::string::npos);
}

}  // TEST_SUITE
