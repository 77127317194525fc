#pragma once

#include "eigqmc/lattice.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace eigqmc::cubature {

// g(x) = x log x with g(0) = 0; negative arguments are rejected.
double g_xlogx(double x);

// Integrand of the nested double integral
//   int_box g( scale * int_{[-1/2,1/2]^s} f(theta, y) dtheta ) dy.
// The engine materializes each inner point set once, hands it to
// prepare_thetas, and then queries log f by point index, so implementations
// backed by an expensive forward map can batch their solves.
class NestedIntegrand {
  public:
    virtual ~NestedIntegrand() = default;
    virtual int theta_dimension() const = 0;
    virtual int data_dimension() const = 0;
    virtual double scale() const { return 1.0; }

    // thetas must outlive subsequent log_f calls. The base implementation
    // keeps a pointer for theta(); overrides should call the base.
    virtual void prepare_thetas(const std::vector<std::vector<double>>& thetas);
    virtual double log_f(std::size_t theta_index, std::span<const double> y) const = 0;

  protected:
    std::span<const double> theta(std::size_t index) const { return (*thetas_)[index]; }
    const std::vector<std::vector<double>>* thetas_ = nullptr;
};

enum class Method { Ftp, Stp };
enum class OuterFamily { Lattice, SmolyakTrapezoid };

struct EstimatorConfig {
    Method method = Method::Ftp;
    int level = 0;
    double sigma = 1.0;          // level-balance exponent for Stp
    int inner_offset = 1;        // inner node count at level l is 2^{l + inner_offset}
    int outer_offset = 1;        // same for the lattice outer rule
    int smolyak_index_shift = 2; // outer level l maps to internal trapezoid level l + shift
    OuterFamily outer_family = OuterFamily::Lattice;
    int shift_count = 8;         // R
    std::uint64_t seed = 1;
    unsigned threads = 0;        // 0: EIGQMC_THREADS or hardware default
    qmc::GeneratingVector inner_z;
    qmc::GeneratingVector outer_z;  // unused for the Smolyak family
    qmc::Box data_box;
};

struct NodeBudget {
    std::uint64_t gross = 0;  // integrand evaluations as configured
    std::uint64_t net = 0;    // gross minus evaluations at repeated (theta, y) pairs
};

struct EstimateResult {
    double mean = 0.0;               // average of per_shift
    std::vector<double> per_shift;
    std::uint64_t n_inner = 0;       // top-level inner node count, per shift
    std::uint64_t n_outer = 0;       // top-level outer node count, per shift
    NodeBudget budget;               // totals across all shifts
};

// Outer cubature nodes with weights that include the box volume, plus the
// number of nodes not present in the next-coarser rule (used for net budgets).
struct WeightedNodes {
    std::size_t count = 0;
    int dim = 0;
    std::vector<double> coords;   // count * dim, node-major
    std::vector<double> weights;
    std::uint64_t fresh = 0;
};

// Plain rule at the given engine level, or the difference between the rule at
// this level and the next-coarser one (level >= 1; level 0 differences are the
// plain level-0 rule). Lattice nodes at consecutive levels nest because point
// counts are powers of two and the shift is common.
WeightedNodes outer_rule_nodes(const EstimatorConfig& config, int level,
                               std::span<const double> shift, bool difference);

// Univariate-composable trapezoid sparse grid on [0,1]^k at internal level q:
// combination coefficients (-1)^{q-|a|} C(k-1, q-|a|) over the band
// max(0, q-k+1) <= |a| <= q; axis rule at level m has one node (m = 0, at 1/2)
// or 2^m + 1 equispaced nodes. Nodes are deduplicated; weights sum to one.
WeightedNodes smolyak_trapezoid(int k, int q);

// Plain average (1/n) sum_i f(theta_i, y) of the recentred inner rule; the
// parameter box has unit volume, so no volume factor appears. Computed through
// exp(log-sum-exp); throws if the average is not strictly positive.
double inner_average(const EstimatorConfig& config, NestedIntegrand& integrand, int level,
                     std::span<const double> inner_shift, std::span<const double> y);

EstimateResult estimate(const EstimatorConfig& config, NestedIntegrand& integrand);

// Oracle evaluation over the full difference triangle; algebraically equal to
// estimate() for the Stp method. Quadratic cost in the level; tests only.
EstimateResult stp_full_triangle(const EstimatorConfig& config, NestedIntegrand& integrand);

NodeBudget node_budget(const EstimatorConfig& config);

// The two per-shift randomization streams derived from the config seed.
std::vector<std::vector<double>> derive_outer_shifts(const EstimatorConfig& config);
std::vector<std::vector<double>> derive_inner_shifts(const EstimatorConfig& config);

}  // namespace eigqmc::cubature
