#include "CLI11.hpp"

#include "eigqmc/combinatorics.hpp"
#include "eigqmc/config.hpp"
#include "eigqmc/cubature.hpp"
#include "eigqmc/eig.hpp"
#include "eigqmc/fem.hpp"
#include "eigqmc/lattice.hpp"
#include "eigqmc/oracle.hpp"
#include "eigqmc/problems.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <deque>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using eigqmc::config::ExperimentConfig;

std::string real_text(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// One common flag bound to a config key; applied only when given.
struct KeyedFlag {
    CLI::Option* opt = nullptr;
    std::string key;
    std::string value;
};

struct CommonFlags {
    CLI::Option* config_opt = nullptr;
    std::string config_file;
    CLI::Option* preset_opt = nullptr;
    std::string preset;
    CLI::Option* timing_opt = nullptr;
    std::vector<std::string> sets;
    std::deque<KeyedFlag> keyed;  // deque: CLI11 holds references into elements
};

void add_common_flags(CLI::App* cmd, CommonFlags& f) {
    f.config_opt = cmd->add_option("--config", f.config_file, "key=value configuration file");
    f.preset_opt = cmd->add_option("--preset", f.preset, "named preset: desk or paper");
    auto keyed = [&](const std::string& flag, const std::string& key, const std::string& help) {
        f.keyed.emplace_back();
        KeyedFlag& kf = f.keyed.back();
        kf.key = key;
        kf.opt = cmd->add_option(flag, kf.value, help);
    };
    keyed("--problem", "problem", "paper_i | paper_ii | toy_analytic | manufactured");
    keyed("--s", "s", "parameter dimension");
    keyed("--mesh_exponent", "mesh_exponent", "grid refinement exponent q");
    keyed("--gamma", "gamma", "noise variance (scaled identity)");
    keyed("--K", "K", "data-box half-width");
    keyed("--eps", "eps", "tail tolerance; derives K when set (or 'none')");
    keyed("--box_center", "box_center", "comma-separated data-box center");
    keyed("--method", "method", "ftp | stp");
    keyed("--levels", "levels", "level sweep, e.g. 0..5 or 0,2,4");
    keyed("--sigma", "sigma", "level-balance exponent for stp");
    keyed("--inner_offset", "inner_offset", "inner rule level offset");
    keyed("--outer_offset", "outer_offset", "outer lattice level offset");
    keyed("--smolyak_index_shift", "smolyak_index_shift", "outer sparse-rule index shift");
    keyed("--outer_family", "outer_family", "lattice | smolyak");
    keyed("--error_mode", "error_mode", "rms | abs");
    keyed("--reference_level", "reference_level", "abs-mode reference level (or 'none')");
    keyed("--R", "R", "number of random shifts");
    keyed("--seed", "seed", "randomization seed");
    keyed("--inner_vector_file", "inner_vector_file", "load inner generating vector from file");
    keyed("--outer_vector_file", "outer_vector_file", "load outer generating vector from file");
    keyed("--design", "design", "comma-separated sensor indices into the 3x3 universe");
    keyed("--threads", "threads", "worker thread cap (0: automatic)");
    keyed("--toy_a", "toy_a", "linear forward coefficients of the analytic model");
    keyed("--p", "p", "summability exponent of the sensitivity bounds");
    keyed("--delta", "delta", "rate-loss parameter in (0, 1/2)");
    keyed("--C", "C", "uniform forward-map bound");
    keyed("--beta", "beta", "factorial growth exponent");
    keyed("--fit_window", "fit_window", "slope fit window (0: method default)");
    keyed("--output", "output", "output file (default: stdout)");
    f.timing_opt = cmd->add_flag("--timing", "record wall-clock milliseconds in runtime_ms");
    cmd->add_option("--set", f.sets, "extra key=value override, repeatable");
}

std::pair<std::string, std::string> split_assignment(const std::string& text) {
    const std::size_t eq = text.find('=');
    if (eq == std::string::npos)
        throw std::invalid_argument("expected key=value, got '" + text + "'");
    return {text.substr(0, eq), text.substr(eq + 1)};
}

ExperimentConfig build_config(const CommonFlags& f) {
    std::vector<std::pair<std::string, std::string>> file_pairs;
    if (f.config_opt->count() > 0)
        file_pairs = eigqmc::config::read_config_pairs(f.config_file);

    // The problem choice fixes the baseline; every later source overrides it.
    std::string problem_text = "paper_i";
    for (const auto& [key, value] : file_pairs)
        if (key == "problem") problem_text = value;
    for (const auto& kf : f.keyed)
        if (kf.key == "problem" && kf.opt->count() > 0) problem_text = kf.value;
    for (const auto& text : f.sets) {
        const auto [key, value] = split_assignment(text);
        if (key == "problem") problem_text = value;
    }

    ExperimentConfig cfg =
        eigqmc::config::problem_baseline(eigqmc::config::parse_problem(problem_text));
    if (f.preset_opt->count() > 0) eigqmc::config::apply_preset(cfg, f.preset);
    for (const auto& [key, value] : file_pairs) eigqmc::config::apply_override(cfg, key, value);
    for (const auto& kf : f.keyed)
        if (kf.opt->count() > 0) eigqmc::config::apply_override(cfg, kf.key, kf.value);
    if (f.timing_opt->count() > 0) eigqmc::config::apply_override(cfg, "timing", "true");
    for (const auto& text : f.sets) {
        const auto [key, value] = split_assignment(text);
        eigqmc::config::apply_override(cfg, key, value);
    }
    cfg.validate();
    return cfg;
}

void with_output(const std::string& path, const std::function<void(std::ostream&)>& body) {
    if (path.empty()) {
        body(std::cout);
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file '" + path + "'");
    body(out);
}

eigqmc::eig::CsvMeta make_meta(const ExperimentConfig& cfg) {
    eigqmc::eig::CsvMeta meta;
    meta.config_hash = cfg.hash();
    meta.seed = cfg.seed;
    meta.version = eigqmc::config::version();
    std::istringstream is(cfg.canonical());
    std::string line;
    while (std::getline(is, line)) meta.config_lines.push_back(line);
    return meta;
}

void print_provenance(std::ostream& out, const ExperimentConfig& cfg) {
    out << "# config_hash: " << cfg.hash() << "\n";
    out << "# seed: " << cfg.seed << "\n";
    out << "# version: " << eigqmc::config::version() << "\n";
}

std::string design_id_text(const std::vector<std::size_t>& design) {
    if (design.empty()) return "none";
    std::string out;
    for (std::size_t i = 0; i < design.size(); ++i) {
        if (i) out += '-';
        out += std::to_string(design[i]);
    }
    return out;
}

std::string sensors_text(const eigqmc::config::Experiment& ex,
                         const std::vector<std::size_t>& design) {
    if (!ex.model) return "";
    std::string out;
    for (std::size_t i = 0; i < design.size(); ++i) {
        if (i) out += ';';
        const auto& pt = ex.model->universe()[design[i]];
        out += real_text(pt[0]);
        out += ':';
        out += real_text(pt[1]);
    }
    return out;
}

std::string method_text(eigqmc::cubature::Method method) {
    return method == eigqmc::cubature::Method::Ftp ? "ftp" : "stp";
}

std::int64_t elapsed_ms(const std::chrono::steady_clock::time_point& start) {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::steady_clock::now() - start)
        .count();
}

int run_cbc(const ExperimentConfig& cfg, const std::string& role, const std::string& n_text) {
    const bool inner = role == "inner";
    if (!inner && role != "outer")
        throw std::invalid_argument("cbc: role must be inner or outer");

    std::size_t dimension;
    eigqmc::weights::WeightSchedule schedule =
        inner ? eigqmc::config::inner_schedule(cfg) : eigqmc::config::outer_schedule(cfg);
    if (inner) {
        dimension = static_cast<std::size_t>(cfg.s);
    } else {
        dimension = cfg.problem == eigqmc::config::Problem::ToyAnalytic ? 1 : cfg.design.size();
    }

    std::uint64_t n;
    if (!n_text.empty()) {
        n = std::stoull(n_text);
    } else {
        const int top = cfg.levels.back();
        const int deepest = cfg.error_mode == eigqmc::eig::ErrorMode::Abs
                                ? std::max(top, cfg.effective_reference_level())
                                : top;
        int level = deepest;
        if (cfg.method == eigqmc::cubature::Method::Stp)
            level = inner ? static_cast<int>(std::lround(cfg.sigma * deepest))
                          : static_cast<int>(std::floor(deepest / cfg.sigma + 1e-9));
        n = std::uint64_t{1} << (level + (inner ? cfg.inner_offset : cfg.outer_offset));
    }

    const eigqmc::qmc::CbcResult result = eigqmc::qmc::cbc_construct(n, dimension, schedule);
    with_output(cfg.output_path, [&](std::ostream& out) {
        print_provenance(out, cfg);
        out << "# role: " << role << "\n";
        out << "# n: " << n << "\n";
        out << "# schedule: " << schedule.describe() << "\n";
        out << "# criterion: " << real_text(result.criterion.back()) << "\n";
        for (std::size_t j = 0; j < result.vector.dimension(); ++j)
            out << (j + 1) << ' ' << result.vector.component(j) << "\n";
    });
    return 0;
}

int run_solve_pde(const ExperimentConfig& cfg, const std::string& theta_text) {
    using eigqmc::config::Problem;
    if (cfg.problem == Problem::Manufactured) {
        // Known-solution refinement sweep: u = sin(pi x1) sin(pi x2) with unit
        // coefficient, source 2 pi^2 u.
        const double pi = std::acos(-1.0);
        auto exact = [pi](double x, double y) { return std::sin(pi * x) * std::sin(pi * y); };
        auto source = [pi, exact](double x, double y) { return 2.0 * pi * pi * exact(x, y); };
        auto one = [](double, double) { return 1.0; };
        std::vector<double> hs, errs;
        with_output(cfg.output_path, [&](std::ostream& out) {
            print_provenance(out, cfg);
            out << "# q h l2_error\n";
            for (int q = 3; q <= 6; ++q) {
                const eigqmc::fem::FemSolver solver(q);
                const Eigen::VectorXd u = solver.solve(one, source);
                const double err = solver.l2_error(u, exact);
                hs.push_back(solver.mesh().h);
                errs.push_back(err);
                out << q << ' ' << real_text(solver.mesh().h) << ' ' << real_text(err) << "\n";
            }
            double sx = 0, sy = 0, sxx = 0, sxy = 0;
            for (std::size_t i = 0; i < hs.size(); ++i) {
                const double x = std::log(hs[i]), y = std::log(errs[i]);
                sx += x;
                sy += y;
                sxx += x * x;
                sxy += x * y;
            }
            const double n = static_cast<double>(hs.size());
            out << "# l2_slope_vs_h: " << real_text((n * sxy - sx * sy) / (n * sxx - sx * sx))
                << "\n";
        });
        return 0;
    }
    if (cfg.problem == Problem::ToyAnalytic)
        throw std::invalid_argument("solve-pde: the analytic problem has no mesh");

    eigqmc::fem::DiffusionField field;
    field.kind = cfg.problem == Problem::PaperII ? eigqmc::fem::FieldKind::Periodic
                                                 : eigqmc::fem::FieldKind::Affine;
    field.s = cfg.s;
    const eigqmc::fem::ForwardModel model(cfg.mesh_exponent, field,
                                          eigqmc::fem::default_universe());

    std::vector<double> theta(static_cast<std::size_t>(cfg.s), 0.0);
    if (!theta_text.empty()) {
        std::size_t i = 0;
        std::stringstream ss(theta_text);
        std::string part;
        while (std::getline(ss, part, ',')) {
            if (i >= theta.size())
                throw std::invalid_argument("solve-pde: theta has more than s entries");
            theta[i++] = std::stod(part);
        }
        if (i != theta.size())
            throw std::invalid_argument("solve-pde: theta must have s entries");
    }

    const std::vector<double> values = model.observe_all(theta);
    with_output(cfg.output_path, [&](std::ostream& out) {
        print_provenance(out, cfg);
        out << "# x y u\n";
        for (std::size_t i = 0; i < values.size(); ++i) {
            const auto& pt = model.universe()[i];
            out << real_text(pt[0]) << ' ' << real_text(pt[1]) << ' ' << real_text(values[i])
                << "\n";
        }
    });
    return 0;
}

int run_eig(const ExperimentConfig& cfg) {
    const eigqmc::config::Experiment ex = eigqmc::config::assemble(cfg);
    eigqmc::cubature::EstimatorConfig est_cfg = ex.estimator;
    est_cfg.level = cfg.levels.back();
    const auto integrand = ex.integrand_factory(ex.design);

    const auto start = std::chrono::steady_clock::now();
    const eigqmc::eig::EigEstimate est =
        eigqmc::eig::eig_for_design(est_cfg, *integrand, ex.log_normalizer, ex.design);
    const std::int64_t ms = cfg.timing ? elapsed_ms(start) : 0;

    eigqmc::eig::CsvRow row;
    row.design_id = design_id_text(ex.design);
    row.sensors = sensors_text(ex, ex.design);
    row.method = method_text(cfg.method);
    row.level = est_cfg.level;
    row.n_inner = est.raw.n_inner;
    row.n_outer = est.raw.n_outer;
    row.shift_count = cfg.shift_count;
    row.n_gross = est.raw.budget.gross;
    row.n_net = est.raw.budget.net;
    row.i_k = est.i_k;
    row.eig = est.eig;
    row.runtime_ms = ms;
    with_output(cfg.output_path,
                [&](std::ostream& out) { eigqmc::eig::write_csv(out, make_meta(cfg), {row}); });
    return 0;
}

int run_design_search(const ExperimentConfig& cfg) {
    const eigqmc::config::Experiment ex = eigqmc::config::assemble(cfg);
    if (!ex.model)
        throw std::invalid_argument("design-search: requires a sensor-placement problem");
    eigqmc::cubature::EstimatorConfig est_cfg = ex.estimator;
    est_cfg.level = cfg.levels.back();
    const std::vector<std::vector<std::size_t>> designs =
        eigqmc::eig::enumerate_designs(ex.universe_size, cfg.design.size());

    const auto start = std::chrono::steady_clock::now();
    const eigqmc::eig::DesignSearchResult result = eigqmc::eig::design_search(
        est_cfg, ex.log_normalizer, designs, ex.integrand_factory);
    // Whole-search wall time; per-design attribution is meaningless with the
    // shared solve cache.
    const std::int64_t ms = cfg.timing ? elapsed_ms(start) : 0;

    std::vector<std::size_t> order(designs.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return result.estimates[a].eig > result.estimates[b].eig;
    });

    std::vector<eigqmc::eig::CsvRow> rows;
    for (std::size_t idx : order) {
        const eigqmc::eig::EigEstimate& est = result.estimates[idx];
        eigqmc::eig::CsvRow row;
        row.design_id = design_id_text(est.design);
        row.sensors = sensors_text(ex, est.design);
        row.method = method_text(cfg.method);
        row.level = est_cfg.level;
        row.n_inner = est.raw.n_inner;
        row.n_outer = est.raw.n_outer;
        row.shift_count = cfg.shift_count;
        row.n_gross = est.raw.budget.gross;
        row.n_net = est.raw.budget.net;
        row.i_k = est.i_k;
        row.eig = est.eig;
        row.runtime_ms = ms;
        rows.push_back(std::move(row));
    }

    eigqmc::eig::CsvMeta meta = make_meta(cfg);
    meta.extra_comments.push_back(
        "best_design: " + design_id_text(designs[result.best_index]));
    with_output(cfg.output_path,
                [&](std::ostream& out) { eigqmc::eig::write_csv(out, meta, rows); });
    return 0;
}

int run_convergence(const ExperimentConfig& cfg) {
    const eigqmc::config::Experiment ex = eigqmc::config::assemble(cfg);
    eigqmc::cubature::EstimatorConfig base = ex.estimator;
    const auto integrand = ex.integrand_factory(ex.design);

    std::optional<int> reference_level;
    if (cfg.error_mode == eigqmc::eig::ErrorMode::Abs)
        reference_level = cfg.effective_reference_level();

    const auto start = std::chrono::steady_clock::now();
    const eigqmc::eig::ConvergenceStudy study =
        eigqmc::eig::convergence_study(base, *integrand, cfg.levels, cfg.error_mode,
                                       reference_level, cfg.effective_fit_window());
    const std::int64_t ms = cfg.timing ? elapsed_ms(start) : 0;

    std::vector<eigqmc::eig::CsvRow> rows;
    for (const auto& srow : study.rows) {
        eigqmc::eig::CsvRow row;
        row.design_id = design_id_text(ex.design);
        row.sensors = sensors_text(ex, ex.design);
        row.method = method_text(cfg.method);
        row.level = srow.level;
        row.n_inner = srow.n_inner;
        row.n_outer = srow.n_outer;
        row.shift_count = cfg.shift_count;
        row.n_gross = srow.budget.gross;
        row.n_net = srow.budget.net;
        row.i_k = srow.estimate;
        row.eig = ex.log_normalizer - 1.0 - srow.estimate;
        if (cfg.error_mode == eigqmc::eig::ErrorMode::Rms)
            row.rms_error = srow.error;
        else
            row.abs_error = srow.error;
        row.runtime_ms = ms;
        rows.push_back(std::move(row));
    }

    eigqmc::eig::CsvMeta meta = make_meta(cfg);
    meta.extra_comments.push_back(
        "fitted_slope: " + (study.slope_valid ? real_text(study.slope) : std::string("invalid")));
    meta.extra_comments.push_back("fit_window: " + std::to_string(study.fit_window));
    meta.extra_comments.push_back(
        std::string("error_mode: ") +
        (cfg.error_mode == eigqmc::eig::ErrorMode::Rms ? "rms" : "abs"));
    if (cfg.error_mode == eigqmc::eig::ErrorMode::Abs) {
        meta.extra_comments.push_back("reference_level: " + std::to_string(study.reference_level));
        meta.extra_comments.push_back("reference_value: " + real_text(study.reference));
    }
    with_output(cfg.output_path,
                [&](std::ostream& out) { eigqmc::eig::write_csv(out, meta, rows); });
    return 0;
}

int run_oracle(const ExperimentConfig& cfg) {
    namespace comb = eigqmc::combinatorics;
    int failures = 0;
    std::ostringstream report;
    auto check = [&](const std::string& name, bool ok, const std::string& detail = "") {
        report << (ok ? "PASS " : "FAIL ") << name;
        if (!ok && !detail.empty()) report << " (" << detail << ")";
        report << "\n";
        if (!ok) ++failures;
    };

    {
        bool ok = true;
        for (unsigned v = 1; v <= 30 && ok; ++v) ok = comb::celine_identity_check(v);
        check("binomial-sum identity, orders 1..30", ok);
    }
    {
        bool ok = true;
        for (unsigned v = 1; v <= 25 && ok; ++v)
            for (unsigned lam = 2; lam <= v + 1 && ok; ++lam)
                ok = comb::gosper_identity_check(v, lam);
        check("falling-factorial sum identity, orders 1..25", ok);
    }
    {
        bool ok = true;
        for (unsigned n = 0; n <= 15 && ok; ++n)
            for (unsigned k = 1; k <= n + 1 && ok; ++k)
                ok = comb::stirling_sum_identity_check(n, k);
        check("partition-number recurrence sum, orders 0..15", ok);
    }
    {
        const eigqmc::oracle::LahSharpnessReport lah = eigqmc::oracle::verify_lah_sharpness(6, 3);
        check("recursion equals closed form, order <= 6, dim <= 3", lah.ok(),
              std::to_string(lah.mismatches.size()) + " mismatches of " +
                  std::to_string(lah.pairs_checked) + " pairs");
    }
    {
        bool ok = true;
        for (std::size_t k = 1; k <= 4 && ok; ++k)
            for (int level = 0; level <= 10 && ok; ++level)
                ok = eigqmc::oracle::combination_coefficient_sum(k, level) == 1;
        check("combination coefficients sum to one", ok);
    }
    {
        bool ok = true;
        std::string detail;
        for (std::size_t k = 1; k <= 3 && ok; ++k) {
            for (int level = 0; level <= 6 && ok; ++level) {
                const std::uint64_t direct = eigqmc::oracle::sparse_node_count(k, level);
                const std::uint64_t engine =
                    eigqmc::cubature::smolyak_trapezoid(static_cast<int>(k), level).count;
                if (direct != engine) {
                    ok = false;
                    detail = "k=" + std::to_string(k) + " level=" + std::to_string(level) +
                             ": " + std::to_string(direct) + " vs " + std::to_string(engine);
                }
            }
        }
        check("sparse node counts match the engine", ok, detail);
    }
    {
        bool ok = true;
        for (int m = 1; m <= 12 && ok; ++m)
            ok = eigqmc::oracle::sparse_node_count(1, m) == (std::uint64_t{1} << m) + 1;
        check("one-dimensional sparse rule sizes", ok);
    }
    {
        // Self-converging dense reference on the analytic problem.
        eigqmc::oracle::DenseQuadratureSpec spec;
        spec.s = 1;
        spec.k = 1;
        spec.points_per_dim = 16;
        spec.theta_lower = {-0.5};
        spec.theta_upper = {0.5};
        spec.y_lower = {-2.0};
        spec.y_upper = {2.0};
        const double scale = 1.0 / std::sqrt(2.0 * std::acos(-1.0));
        bool ok = true;
        std::string detail;
        double value = 0.0;
        try {
            value = eigqmc::oracle::dense_double_integral(
                spec,
                [](const std::vector<double>& theta, const std::vector<double>& y) {
                    const double r = y[0] - theta[0];
                    return std::exp(-0.5 * r * r);
                },
                scale);
        } catch (const std::exception& e) {
            ok = false;
            detail = e.what();
        }
        check("dense reference self-consistency", ok, detail);
        if (ok) report << "# dense reference value: " << real_text(value) << "\n";
    }

    with_output(cfg.output_path, [&](std::ostream& out) {
        print_provenance(out, cfg);
        out << report.str();
        out << (failures == 0 ? "all checks passed\n"
                              : std::to_string(failures) + " checks failed\n");
    });
    return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Expected-information-gain estimation for sensor placement"};
    app.require_subcommand(1);

    CommonFlags cbc_flags, solve_flags, eig_flags, search_flags, conv_flags, oracle_flags;
    std::string cbc_role = "inner", cbc_n, solve_theta;

    CLI::App* cbc = app.add_subcommand("cbc", "construct and emit a generating vector");
    add_common_flags(cbc, cbc_flags);
    cbc->add_option("--role", cbc_role, "inner | outer");
    cbc->add_option("--n", cbc_n, "point count (power of two); default from the level sweep");

    CLI::App* solve = app.add_subcommand("solve-pde", "single forward solve or mesh sweep");
    add_common_flags(solve, solve_flags);
    solve->add_option("--theta", solve_theta, "comma-separated parameter vector (default 0)");

    CLI::App* eig_cmd = app.add_subcommand("eig", "estimate the information gain of one design");
    add_common_flags(eig_cmd, eig_flags);

    CLI::App* search = app.add_subcommand("design-search", "rank every sensor subset");
    add_common_flags(search, search_flags);

    CLI::App* conv = app.add_subcommand("convergence", "level sweep with error and slope");
    add_common_flags(conv, conv_flags);

    CLI::App* oracle_cmd = app.add_subcommand("oracle", "run independent reference checks");
    add_common_flags(oracle_cmd, oracle_flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (app.got_subcommand(cbc)) return run_cbc(build_config(cbc_flags), cbc_role, cbc_n);
        if (app.got_subcommand(solve))
            return run_solve_pde(build_config(solve_flags), solve_theta);
        if (app.got_subcommand(eig_cmd)) return run_eig(build_config(eig_flags));
        if (app.got_subcommand(search)) return run_design_search(build_config(search_flags));
        if (app.got_subcommand(conv)) return run_convergence(build_config(conv_flags));
        if (app.got_subcommand(oracle_cmd)) return run_oracle(build_config(oracle_flags));
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
