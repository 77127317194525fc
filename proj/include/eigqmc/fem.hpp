#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

namespace eigqmc::fem {

// Uniform triangulation of the unit square: M = 2^q cells per side, each cell
// split by the diagonal from (i, j) to (i+1, j+1). Node (i, j) sits at
// (i h, j h) with h = 2^{-q}.
struct UnitSquareMesh {
    explicit UnitSquareMesh(int exponent);

    int q = 0;
    int M = 1;
    double h = 1.0;

    std::size_t node_count() const { return static_cast<std::size_t>(M + 1) * (M + 1); }
    std::size_t node_index(int i, int j) const {
        return static_cast<std::size_t>(j) * (M + 1) + i;
    }
    std::array<double, 2> node_coords(std::size_t idx) const {
        const int i = static_cast<int>(idx % (M + 1));
        const int j = static_cast<int>(idx / (M + 1));
        return {i * h, j * h};
    }
    bool is_boundary(int i, int j) const { return i == 0 || j == 0 || i == M || j == M; }

    // Index of the mesh node at (x, y), if (x, y) coincides with one.
    std::optional<std::size_t> node_at(double x, double y) const;
};

enum class FieldKind { Affine, Periodic };

// Diffusion coefficient a(x, theta) = 1 + amp * sum_{j=1}^{s} j^{-2} g_j(theta_j)
// sin(pi j x1) sin(pi j x2), with
//   Affine:   amp = 0.1,          g_j(t) = t,           theta in [-1/2, 1/2]^s
//   Periodic: amp = 0.1/sqrt(6),  g_j(t) = sin(2 pi t), theta in [-1/2, 1/2]^s
struct DiffusionField {
    FieldKind kind = FieldKind::Affine;
    int s = 1;

    double amplitude() const;
    double evaluate(double x1, double x2, std::span<const double> theta) const;
    void validate_theta(std::span<const double> theta) const;
};

using ScalarField = std::function<double(double, double)>;

// Piecewise-linear finite elements on the triangulation, homogeneous Dirichlet
// boundary. The coefficient is sampled at triangle centroids (one-point rule);
// the load uses the three-edge-midpoint rule, exact for quadratics and hence
// exact for linear sources against the linear basis.
class FemSolver {
  public:
    explicit FemSolver(int mesh_exponent);

    const UnitSquareMesh& mesh() const { return mesh_; }

    // Full nodal coefficient vector (zeros on the boundary). Throws if the
    // assembled matrix is not symmetric positive definite, which signals a
    // non-positive coefficient.
    Eigen::VectorXd solve(const ScalarField& coefficient, const ScalarField& source) const;

    // L2 norm of (nodal field - exact) using the edge-midpoint rule per triangle.
    double l2_error(const Eigen::VectorXd& nodal, const ScalarField& exact) const;

  private:
    UnitSquareMesh mesh_;
    std::vector<std::array<std::size_t, 3>> triangles_;
};

// k sensor locations; each must coincide with a mesh node.
struct Design {
    std::vector<std::array<double, 2>> sensors;
};

void validate_design(const UnitSquareMesh& mesh, const Design& design);

// Point values of the nodal field at the design's sensors.
std::vector<double> observe(const UnitSquareMesh& mesh, const Eigen::VectorXd& nodal,
                            const Design& design);

// Forward map bundling mesh, coefficient family, and a fixed observation
// universe. Observations at all universe points are computed in one solve and
// cached on the parameter vector (keyed by exact bit patterns), so repeated
// level or design sweeps pay for each distinct theta once.
class ForwardModel {
  public:
    ForwardModel(int mesh_exponent, DiffusionField field,
                 std::vector<std::array<double, 2>> universe);

    const UnitSquareMesh& mesh() const { return solver_.mesh(); }
    const DiffusionField& field() const { return field_; }
    const std::vector<std::array<double, 2>>& universe() const { return universe_; }
    int parameter_dimension() const { return field_.s; }

    // Observation values at all universe points, cached.
    std::vector<double> observe_all(std::span<const double> theta) const;

    // Subset of observe_all at the given universe indices.
    std::vector<double> forward(std::span<const double> theta,
                                std::span<const std::size_t> universe_indices) const;

    Eigen::VectorXd solve(std::span<const double> theta) const;  // uncached, full field

    std::size_t cache_size() const;
    std::uint64_t solve_count() const { return solves_; }

  private:
    FemSolver solver_;
    DiffusionField field_;
    std::vector<std::array<double, 2>> universe_;
    std::vector<std::size_t> universe_nodes_;

    struct KeyHash {
        std::size_t operator()(const std::vector<std::uint64_t>& key) const;
    };
    mutable std::unordered_map<std::vector<std::uint64_t>, std::vector<double>, KeyHash> cache_;
    mutable std::mutex cache_mutex_;
    mutable std::uint64_t solves_ = 0;
};

// Nine-point observation grid {0.25, 0.5, 0.75}^2, row-major from (0.25, 0.25).
std::vector<std::array<double, 2>> default_universe();

}  // namespace eigqmc::fem
