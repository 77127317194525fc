#pragma once

#include "eigqmc/combinatorics.hpp"

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

// Brute-force reference computations kept deliberately separate from the main
// estimator code paths. Everything here favors simplicity over speed and is
// single threaded.
namespace eigqmc::oracle {

// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// Newton iteration on the Legendre polynomial; n in [1, 512].
GaussRule gauss_legendre(int n);

struct DenseQuadratureSpec {
    std::size_t s = 1;  // parameter dimension, at most 2
    std::size_t k = 1;  // data dimension, at most 2
    int points_per_dim = 32;
    std::vector<double> theta_lower, theta_upper;
    std::vector<double> y_lower, y_upper;
};

// Tensor Gauss-Legendre approximation of
//   integral over the y box of  xlogx( scale * mean over the theta box of f )
// with the inner mean also by Gauss-Legendre. The order is doubled until two
// successive results agree to 1e-8; throws after three doublings without
// agreement or when a pass would exceed 1e8 function evaluations.
double dense_double_integral(
    const DenseQuadratureSpec& spec,
    const std::function<double(const std::vector<double>&, const std::vector<double>&)>& f,
    double scale);

// Exhaustive exact comparison of the recursion-defined coefficients (equality
// mode, beta = 1, unit b) against the factorial closed form, over all
// multi-index pairs with |nu| <= max_order, dimension <= min(k_max, 3).
struct LahSharpnessReport {
    std::uint64_t pairs_checked = 0;
    std::vector<std::pair<combinatorics::MultiIndex, combinatorics::MultiIndex>> mismatches;
    bool ok() const { return mismatches.empty(); }
};

LahSharpnessReport verify_lah_sharpness(unsigned max_order, std::size_t k_max);

// Distinct-node count of the sparse trapezoidal rule, by direct set
// construction over the index simplex. k <= 4, level <= 12.
std::uint64_t sparse_node_count(std::size_t k, int level);

// Sum of combination-technique coefficients times the simplex slice counts;
// the inclusion-exclusion identity makes this 1 for every k >= 1, level >= 0.
long long combination_coefficient_sum(std::size_t k, int level);

}  // namespace eigqmc::oracle
