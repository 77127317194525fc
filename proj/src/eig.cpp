#include "eigqmc/eig.hpp"

#include "eigqmc/util.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>
#include <stdexcept>

namespace eigqmc::eig {

std::vector<std::vector<std::size_t>> enumerate_designs(std::size_t m, std::size_t k) {
    if (k < 1 || k > m)
        throw std::invalid_argument("enumerate_designs: requires 1 <= k <= m");
    std::vector<std::vector<std::size_t>> out;
    std::vector<std::size_t> cur(k);
    for (std::size_t i = 0; i < k; ++i) cur[i] = i;
    for (;;) {
        out.push_back(cur);
        // Advance the rightmost index that can still move.
        std::size_t i = k;
        while (i > 0 && cur[i - 1] == m - k + (i - 1)) --i;
        if (i == 0) break;
        ++cur[i - 1];
        for (std::size_t j = i; j < k; ++j) cur[j] = cur[j - 1] + 1;
    }
    return out;
}

EigEstimate eig_for_design(const cubature::EstimatorConfig& config,
                           cubature::NestedIntegrand& integrand, double log_normalizer,
                           std::vector<std::size_t> design) {
    EigEstimate e;
    e.design = std::move(design);
    e.raw = cubature::estimate(config, integrand);
    e.i_k = e.raw.mean;
    e.eig = log_normalizer - 1.0 - e.i_k;
    return e;
}

DesignSearchResult design_search(
    const cubature::EstimatorConfig& config, double log_normalizer,
    const std::vector<std::vector<std::size_t>>& designs,
    const std::function<std::unique_ptr<cubature::NestedIntegrand>(
        const std::vector<std::size_t>&)>& integrand_factory) {
    if (designs.empty()) throw std::invalid_argument("design_search: no designs");
    DesignSearchResult result;
    result.estimates.resize(designs.size());
    for (std::size_t d = 0; d < designs.size(); ++d) {
        auto integrand = integrand_factory(designs[d]);
        result.estimates[d] = eig_for_design(config, *integrand, log_normalizer, designs[d]);
    }
    // argmin of i_k; exact ties go to the lexicographically smallest design,
    // which is the earliest index given the enumeration order.
    std::size_t best = 0;
    for (std::size_t d = 1; d < designs.size(); ++d)
        if (result.estimates[d].i_k < result.estimates[best].i_k) best = d;
    result.best_index = best;
    return result;
}

double fit_loglog_slope(std::span<const std::uint64_t> budgets, std::span<const double> errors,
                        std::size_t window, bool& valid) {
    valid = false;
    if (budgets.size() != errors.size() || budgets.empty())
        throw std::invalid_argument("fit_loglog_slope: size mismatch");
    window = std::min(window, budgets.size());
    if (window < 2) return 0.0;
    const std::size_t lo = budgets.size() - window;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = lo; i < budgets.size(); ++i) {
        if (!(errors[i] > 0.0)) return std::nan("");
        const double x = std::log(static_cast<double>(budgets[i]));
        const double y = std::log(errors[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double n = static_cast<double>(window);
    const double denom = n * sxx - sx * sx;
    if (std::abs(denom) < 1e-12) return std::nan("");
    valid = true;
    return (n * sxy - sx * sy) / denom;
}

ConvergenceStudy convergence_study(const cubature::EstimatorConfig& base,
                                   cubature::NestedIntegrand& integrand,
                                   const std::vector<int>& levels, ErrorMode mode,
                                   std::optional<int> reference_level,
                                   std::size_t fit_window) {
    if (levels.empty()) throw std::invalid_argument("convergence_study: no levels");
    for (std::size_t i = 1; i < levels.size(); ++i)
        if (levels[i] <= levels[i - 1])
            throw std::invalid_argument("convergence_study: levels must increase");

    ConvergenceStudy study;
    study.mode = mode;
    study.fit_window = fit_window;

    for (int level : levels) {
        cubature::EstimatorConfig config = base;
        config.level = level;
        if (mode == ErrorMode::Abs && config.shift_count != 1)
            throw std::invalid_argument("convergence_study: Abs mode expects a single shift");
        ConvergenceRow row;
        row.level = level;
        const cubature::EstimateResult res = cubature::estimate(config, integrand);
        row.n_inner = res.n_inner;
        row.n_outer = res.n_outer;
        row.budget = res.budget;
        row.estimate = res.mean;
        row.per_shift = res.per_shift;
        study.rows.push_back(std::move(row));
    }
    for (std::size_t i = 1; i < study.rows.size(); ++i)
        if (study.rows[i].budget.gross <= study.rows[i - 1].budget.gross)
            throw std::runtime_error("convergence_study: budgets must increase with level");

    if (mode == ErrorMode::Rms) {
        study.reference = study.rows.back().estimate;
        study.reference_level = levels.back();
        for (auto& row : study.rows) {
            double acc = 0.0;
            for (double v : row.per_shift) {
                const double d = v - study.reference;
                acc += d * d;
            }
            row.error = std::sqrt(acc / static_cast<double>(row.per_shift.size()));
        }
    } else {
        study.reference_level = reference_level.value_or(levels.back() + 2);
        if (study.reference_level <= levels.back())
            throw std::invalid_argument("convergence_study: reference level must exceed sweep");
        cubature::EstimatorConfig config = base;
        config.level = study.reference_level;
        study.reference = cubature::estimate(config, integrand).mean;
        for (auto& row : study.rows) row.error = std::abs(row.estimate - study.reference);
    }

    std::vector<std::uint64_t> budgets;
    std::vector<double> errors;
    for (const auto& row : study.rows) {
        budgets.push_back(row.budget.gross);
        errors.push_back(row.error);
    }
    study.slope = fit_loglog_slope(budgets, errors, fit_window, study.slope_valid);
    return study;
}

namespace {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

void write_csv(std::ostream& out, const CsvMeta& meta, const std::vector<CsvRow>& rows) {
    out << "# eigqmc-csv v1\n";
    out << "# config_hash: " << meta.config_hash << "\n";
    out << "# seed: " << meta.seed << "\n";
    out << "# version: " << meta.version << "\n";
    for (const auto& line : meta.config_lines) out << "# cfg " << line << "\n";
    for (const auto& line : meta.extra_comments) out << "# " << line << "\n";
    out << "design_id,sensors,method,level,n_inner,n_outer,R,N_gross,N_net,"
           "i_k_estimate,eig,rms_error,abs_error,runtime_ms\n";
    for (const auto& r : rows) {
        out << r.design_id << ',' << r.sensors << ',' << r.method << ',' << r.level << ','
            << r.n_inner << ',' << r.n_outer << ',' << r.shift_count << ',' << r.n_gross << ','
            << r.n_net << ',' << format_double(r.i_k) << ',' << format_double(r.eig) << ',';
        if (r.rms_error) out << format_double(*r.rms_error);
        out << ',';
        if (r.abs_error) out << format_double(*r.abs_error);
        out << ',' << r.runtime_ms << '\n';
    }
}

}  // namespace eigqmc::eig
