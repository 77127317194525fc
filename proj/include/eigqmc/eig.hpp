#pragma once

#include "eigqmc/cubature.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace eigqmc::eig {

// All k-element subsets of {0, ..., m-1} in lexicographic order.
std::vector<std::vector<std::size_t>> enumerate_designs(std::size_t m, std::size_t k);

struct EigEstimate {
    std::vector<std::size_t> design;
    double i_k = 0.0;  // nested double-integral estimate
    double eig = 0.0;  // log C - 1 - i_k
    cubature::EstimateResult raw;
};

// Runs the configured estimator and assembles the information-gain value from
// the estimate and the likelihood log-normalizer.
EigEstimate eig_for_design(const cubature::EstimatorConfig& config,
                           cubature::NestedIntegrand& integrand, double log_normalizer,
                           std::vector<std::size_t> design);

struct DesignSearchResult {
    std::size_t best_index = 0;  // into designs/estimates (argmin of i_k)
    std::vector<EigEstimate> estimates;
};

// Evaluates every design with integrands produced by the factory; ties on the
// i_k estimate resolve to the lexicographically smallest design.
DesignSearchResult design_search(
    const cubature::EstimatorConfig& config, double log_normalizer,
    const std::vector<std::vector<std::size_t>>& designs,
    const std::function<std::unique_ptr<cubature::NestedIntegrand>(
        const std::vector<std::size_t>&)>& integrand_factory);

enum class ErrorMode { Rms, Abs };

struct ConvergenceRow {
    int level = 0;
    std::uint64_t n_inner = 0, n_outer = 0;
    cubature::NodeBudget budget;
    double estimate = 0.0;
    std::vector<double> per_shift;
    double error = 0.0;
};

struct ConvergenceStudy {
    std::vector<ConvergenceRow> rows;
    double reference = 0.0;
    ErrorMode mode = ErrorMode::Rms;
    int reference_level = 0;  // only meaningful for Abs
    double slope = 0.0;
    bool slope_valid = false;
    std::size_t fit_window = 0;
};

// Level sweep at fixed design.
//  Rms: reference is the shift-mean at the highest swept level; the per-level
//       error is the root mean square deviation of the R per-shift estimates
//       from that reference.
//  Abs: single-shift runs compared against a single-shift reference computed
//       at reference_level (defaults to max level + 2).
// The slope is fitted on log(error) vs log(gross budget) over the last
// fit_window levels and flagged invalid if any error in the window vanishes.
ConvergenceStudy convergence_study(const cubature::EstimatorConfig& base,
                                   cubature::NestedIntegrand& integrand,
                                   const std::vector<int>& levels, ErrorMode mode,
                                   std::optional<int> reference_level,
                                   std::size_t fit_window);

double fit_loglog_slope(std::span<const std::uint64_t> budgets, std::span<const double> errors,
                        std::size_t window, bool& valid);

// CSV emission. Header comments carry identification; data rows follow the
// fixed column schema. runtime_ms entries are zero unless timing was measured,
// which keeps default output byte-reproducible for equal config and seed.
struct CsvMeta {
    std::string config_hash;
    std::uint64_t seed = 0;
    std::string version;
    std::vector<std::string> config_lines;    // echoed verbatim as "# cfg <line>"
    std::vector<std::string> extra_comments;  // echoed as "# <line>"
};

struct CsvRow {
    std::string design_id;
    std::string sensors;
    std::string method;
    int level = 0;
    std::uint64_t n_inner = 0, n_outer = 0;
    int shift_count = 0;
    std::uint64_t n_gross = 0, n_net = 0;
    double i_k = 0.0;
    double eig = 0.0;
    std::optional<double> rms_error;
    std::optional<double> abs_error;
    std::int64_t runtime_ms = 0;
};

void write_csv(std::ostream& out, const CsvMeta& meta, const std::vector<CsvRow>& rows);

}  // namespace eigqmc::eig
