#include "eigqmc/fem.hpp"

#include "eigqmc/util.hpp"

#include <Eigen/SparseCholesky>

#include <cmath>
#include <cstring>
#include <numbers>
#include <stdexcept>

namespace eigqmc::fem {

UnitSquareMesh::UnitSquareMesh(int exponent) {
    if (exponent < 1 || exponent > 12)
        throw std::invalid_argument("UnitSquareMesh: exponent must lie in [1, 12]");
    q = exponent;
    M = 1 << q;
    h = 1.0 / M;
}

std::optional<std::size_t> UnitSquareMesh::node_at(double x, double y) const {
    const double gi = x * M, gj = y * M;
    const double ri = std::round(gi), rj = std::round(gj);
    if (std::abs(gi - ri) > 1e-9 || std::abs(gj - rj) > 1e-9) return std::nullopt;
    if (ri < 0 || ri > M || rj < 0 || rj > M) return std::nullopt;
    return node_index(static_cast<int>(ri), static_cast<int>(rj));
}

double DiffusionField::amplitude() const {
    return kind == FieldKind::Affine ? 0.1 : 0.1 / std::sqrt(6.0);
}

void DiffusionField::validate_theta(std::span<const double> theta) const {
    if (static_cast<int>(theta.size()) != s)
        throw std::invalid_argument("DiffusionField: theta dimension mismatch");
    for (double t : theta)
        if (!(t >= -0.5 - 1e-12) || !(t <= 0.5 + 1e-12))
            throw std::invalid_argument("DiffusionField: theta outside [-1/2, 1/2]");
}

double DiffusionField::evaluate(double x1, double x2, std::span<const double> theta) const {
    validate_theta(theta);
    const double amp = amplitude();
    double a = 1.0;
    for (int j = 1; j <= s; ++j) {
        const double t = theta[j - 1];
        const double g = kind == FieldKind::Affine ? t : std::sin(2.0 * std::numbers::pi * t);
        a += amp * g / (static_cast<double>(j) * j) * std::sin(std::numbers::pi * j * x1) *
             std::sin(std::numbers::pi * j * x2);
    }
    return a;
}

FemSolver::FemSolver(int mesh_exponent) : mesh_(mesh_exponent) {
    triangles_.reserve(static_cast<std::size_t>(mesh_.M) * mesh_.M * 2);
    for (int j = 0; j < mesh_.M; ++j) {
        for (int i = 0; i < mesh_.M; ++i) {
            const std::size_t v00 = mesh_.node_index(i, j);
            const std::size_t v10 = mesh_.node_index(i + 1, j);
            const std::size_t v01 = mesh_.node_index(i, j + 1);
            const std::size_t v11 = mesh_.node_index(i + 1, j + 1);
            triangles_.push_back({v00, v10, v11});
            triangles_.push_back({v00, v11, v01});
        }
    }
}

Eigen::VectorXd FemSolver::solve(const ScalarField& coefficient, const ScalarField& source) const {
    const int M = mesh_.M;
    const auto interior_index = [&](std::size_t node) -> int {
        const int i = static_cast<int>(node % (M + 1));
        const int j = static_cast<int>(node / (M + 1));
        if (mesh_.is_boundary(i, j)) return -1;
        return (j - 1) * (M - 1) + (i - 1);
    };
    const int n_int = (M - 1) * (M - 1);
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(triangles_.size() * 9);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n_int);

    std::array<double, 2> pts[3];
    for (const auto& tri : triangles_) {
        for (int a = 0; a < 3; ++a) pts[a] = mesh_.node_coords(tri[a]);
        const double x0 = pts[0][0], y0 = pts[0][1];
        const double x1 = pts[1][0], y1 = pts[1][1];
        const double x2 = pts[2][0], y2 = pts[2][1];
        const double area2 = (x1 - x0) * (y2 - y0) - (x2 - x0) * (y1 - y0);  // 2A > 0
        const double area = 0.5 * area2;
        // Gradient components of the barycentric basis.
        const double bgrad[3] = {y1 - y2, y2 - y0, y0 - y1};
        const double cgrad[3] = {x2 - x1, x0 - x2, x1 - x0};
        const double a_mid = coefficient((x0 + x1 + x2) / 3.0, (y0 + y1 + y2) / 3.0);
        // Stiffness: a(centroid) (b_a b_c + c_a c_c) / (4A).
        int loc_int[3];
        for (int a = 0; a < 3; ++a) loc_int[a] = interior_index(tri[a]);
        for (int a = 0; a < 3; ++a) {
            if (loc_int[a] < 0) continue;
            for (int c = 0; c < 3; ++c) {
                if (loc_int[c] < 0) continue;
                const double k = a_mid * (bgrad[a] * bgrad[c] + cgrad[a] * cgrad[c]) / (2.0 * area2);
                triplets.emplace_back(loc_int[a], loc_int[c], k);
            }
        }
        // Load: edge-midpoint rule; the basis value at the midpoint of the
        // edge opposite vertex a is 0, at the two adjacent midpoints 1/2.
        double fm[3];
        for (int m = 0; m < 3; ++m) {
            const int u = (m + 1) % 3, v = (m + 2) % 3;
            fm[m] = source((pts[u][0] + pts[v][0]) / 2.0, (pts[u][1] + pts[v][1]) / 2.0);
        }
        for (int a = 0; a < 3; ++a) {
            if (loc_int[a] < 0) continue;
            const int m1 = (a + 1) % 3, m2 = (a + 2) % 3;  // midpoints on edges touching a
            rhs[loc_int[a]] += area / 3.0 * 0.5 * (fm[m1] + fm[m2]);
        }
    }

    Eigen::SparseMatrix<double> A(n_int, n_int);
    A.setFromTriplets(triplets.begin(), triplets.end());
    Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt(A);
    if (llt.info() != Eigen::Success)
        throw std::runtime_error("FemSolver: stiffness matrix not SPD (coefficient <= 0?)");
    const Eigen::VectorXd u_int = llt.solve(rhs);
    if (llt.info() != Eigen::Success) throw std::runtime_error("FemSolver: solve failed");
    const double rel_res = (A * u_int - rhs).norm() / std::max(rhs.norm(), 1e-300);
    if (rel_res > 1e-10)
        throw std::runtime_error("FemSolver: relative residual above 1e-10");

    Eigen::VectorXd full = Eigen::VectorXd::Zero(mesh_.node_count());
    for (int j = 1; j < M; ++j)
        for (int i = 1; i < M; ++i)
            full[mesh_.node_index(i, j)] = u_int[(j - 1) * (M - 1) + (i - 1)];
    return full;
}

double FemSolver::l2_error(const Eigen::VectorXd& nodal, const ScalarField& exact) const {
    double acc = 0.0;
    std::array<double, 2> pts[3];
    for (const auto& tri : triangles_) {
        for (int a = 0; a < 3; ++a) pts[a] = mesh_.node_coords(tri[a]);
        const double area = 0.5 * ((pts[1][0] - pts[0][0]) * (pts[2][1] - pts[0][1]) -
                                   (pts[2][0] - pts[0][0]) * (pts[1][1] - pts[0][1]));
        for (int m = 0; m < 3; ++m) {
            const int u = (m + 1) % 3, v = (m + 2) % 3;
            const double mx = (pts[u][0] + pts[v][0]) / 2.0;
            const double my = (pts[u][1] + pts[v][1]) / 2.0;
            const double uh = 0.5 * (nodal[tri[u]] + nodal[tri[v]]);
            const double d = uh - exact(mx, my);
            acc += area / 3.0 * d * d;
        }
    }
    return std::sqrt(acc);
}

void validate_design(const UnitSquareMesh& mesh, const Design& design) {
    if (design.sensors.empty()) throw std::invalid_argument("Design: needs at least one sensor");
    for (std::size_t a = 0; a < design.sensors.size(); ++a) {
        const auto& p = design.sensors[a];
        if (!mesh.node_at(p[0], p[1]))
            throw std::invalid_argument("Design: sensor not on a mesh node");
        for (std::size_t b = a + 1; b < design.sensors.size(); ++b)
            if (p == design.sensors[b])
                throw std::invalid_argument("Design: repeated sensor location");
    }
}

std::vector<double> observe(const UnitSquareMesh& mesh, const Eigen::VectorXd& nodal,
                            const Design& design) {
    validate_design(mesh, design);
    std::vector<double> out;
    out.reserve(design.sensors.size());
    for (const auto& p : design.sensors) out.push_back(nodal[*mesh.node_at(p[0], p[1])]);
    return out;
}

ForwardModel::ForwardModel(int mesh_exponent, DiffusionField field,
                           std::vector<std::array<double, 2>> universe)
    : solver_(mesh_exponent), field_(field), universe_(std::move(universe)) {
    if (field_.s < 1) throw std::invalid_argument("ForwardModel: s >= 1 required");
    Design all{universe_};
    validate_design(solver_.mesh(), all);
    for (const auto& p : universe_) universe_nodes_.push_back(*solver_.mesh().node_at(p[0], p[1]));
}

std::size_t ForwardModel::KeyHash::operator()(const std::vector<std::uint64_t>& key) const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (std::uint64_t v : key) {
        for (int b = 0; b < 8; ++b) {
            h ^= (v >> (8 * b)) & 0xffULL;
            h *= 0x100000001b3ULL;
        }
    }
    return static_cast<std::size_t>(h);
}

Eigen::VectorXd ForwardModel::solve(std::span<const double> theta) const {
    field_.validate_theta(theta);
    std::vector<double> th(theta.begin(), theta.end());
    const DiffusionField& f = field_;
    return solver_.solve(
        [&f, &th](double x, double y) { return f.evaluate(x, y, th); },
        [](double x, double) { return 10.0 * x; });
}

std::vector<double> ForwardModel::observe_all(std::span<const double> theta) const {
    field_.validate_theta(theta);
    std::vector<std::uint64_t> key(theta.size());
    for (std::size_t i = 0; i < theta.size(); ++i) {
        std::uint64_t bits;
        std::memcpy(&bits, &theta[i], sizeof bits);
        key[i] = bits;
    }
    {
        std::lock_guard<std::mutex> lock(cache_mutex_);
        if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    }
    const Eigen::VectorXd full = solve(theta);
    std::vector<double> obs;
    obs.reserve(universe_nodes_.size());
    for (std::size_t node : universe_nodes_) obs.push_back(full[node]);
    {
        std::lock_guard<std::mutex> lock(cache_mutex_);
        ++solves_;
        cache_.emplace(std::move(key), obs);
    }
    return obs;
}

std::vector<double> ForwardModel::forward(std::span<const double> theta,
                                          std::span<const std::size_t> universe_indices) const {
    const std::vector<double> all = observe_all(theta);
    std::vector<double> out;
    out.reserve(universe_indices.size());
    for (std::size_t idx : universe_indices) out.push_back(all.at(idx));
    return out;
}

std::size_t ForwardModel::cache_size() const {
    std::lock_guard<std::mutex> lock(cache_mutex_);
    return cache_.size();
}

std::vector<std::array<double, 2>> default_universe() {
    std::vector<std::array<double, 2>> pts;
    for (double y : {0.25, 0.5, 0.75})
        for (double x : {0.25, 0.5, 0.75}) pts.push_back({x, y});
    return pts;
}

}  // namespace eigqmc::fem
