#include "eigqmc/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

namespace eigqmc::oracle {

namespace {

// Deliberately local copy; the estimator has its own.
double xlogx(double x) {
    if (x < 0.0) throw std::domain_error("xlogx: negative argument");
    if (x == 0.0) return 0.0;
    return x * std::log(x);
}

double legendre_value_and_derivative(int n, double x, double& derivative) {
    double p_prev = 1.0, p = x;
    for (int k = 2; k <= n; ++k) {
        const double p_next = ((2 * k - 1) * x * p - (k - 1) * p_prev) / k;
        p_prev = p;
        p = p_next;
    }
    derivative = n * (x * p - p_prev) / (x * x - 1.0);
    return p;
}

}  // namespace

GaussRule gauss_legendre(int n) {
    if (n < 1 || n > 512) throw std::invalid_argument("gauss_legendre: order out of range");
    GaussRule rule;
    rule.nodes.resize(static_cast<std::size_t>(n));
    rule.weights.resize(static_cast<std::size_t>(n));
    const double pi = std::acos(-1.0);
    for (int i = 1; i <= n; ++i) {
        double x = std::cos(pi * (i - 0.25) / (n + 0.5));
        double dp = 1.0;
        for (int iter = 0; iter < 100; ++iter) {
            if (n == 1) {
                // P_1(x) = x; the closed form avoids the 0/0 derivative ratio.
                dp = 1.0;
                x -= x;
                break;
            }
            const double p = legendre_value_and_derivative(n, x, dp);
            const double step = p / dp;
            x -= step;
            if (std::abs(step) < 1e-15) break;
        }
        if (n > 1) legendre_value_and_derivative(n, x, dp);
        rule.nodes[static_cast<std::size_t>(i - 1)] = x;
        rule.weights[static_cast<std::size_t>(i - 1)] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    // cos ordering is descending; keep nodes ascending.
    std::vector<std::size_t> perm(rule.nodes.size());
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::sort(perm.begin(), perm.end(),
              [&](std::size_t a, std::size_t b) { return rule.nodes[a] < rule.nodes[b]; });
    GaussRule sorted;
    for (std::size_t idx : perm) {
        sorted.nodes.push_back(rule.nodes[idx]);
        sorted.weights.push_back(rule.weights[idx]);
    }
    return sorted;
}

namespace {

struct MappedRule {
    // Per-axis nodes and weights mapped to [lo, hi] with the Jacobian folded in.
    std::vector<std::vector<double>> nodes;
    std::vector<std::vector<double>> weights;
};

MappedRule map_rule(const GaussRule& base, const std::vector<double>& lower,
                    const std::vector<double>& upper) {
    MappedRule m;
    for (std::size_t d = 0; d < lower.size(); ++d) {
        const double half = 0.5 * (upper[d] - lower[d]);
        const double mid = 0.5 * (upper[d] + lower[d]);
        std::vector<double> xs, ws;
        for (std::size_t i = 0; i < base.nodes.size(); ++i) {
            xs.push_back(mid + half * base.nodes[i]);
            ws.push_back(half * base.weights[i]);
        }
        m.nodes.push_back(std::move(xs));
        m.weights.push_back(std::move(ws));
    }
    return m;
}

double dense_pass(const DenseQuadratureSpec& spec,
                  const std::function<double(const std::vector<double>&,
                                             const std::vector<double>&)>& f,
                  double scale, int p) {
    const GaussRule base = gauss_legendre(p);
    const MappedRule theta_rule = map_rule(base, spec.theta_lower, spec.theta_upper);
    const MappedRule y_rule = map_rule(base, spec.y_lower, spec.y_upper);

    double theta_volume = 1.0;
    for (std::size_t d = 0; d < spec.s; ++d)
        theta_volume *= spec.theta_upper[d] - spec.theta_lower[d];

    const std::size_t np = static_cast<std::size_t>(p);
    std::vector<double> theta(spec.s, 0.0), y(spec.k, 0.0);
    std::vector<std::size_t> oi(spec.k, 0), ii(spec.s, 0);

    double outer = 0.0;
    for (;;) {
        double wy = 1.0;
        for (std::size_t d = 0; d < spec.k; ++d) {
            y[d] = y_rule.nodes[d][oi[d]];
            wy *= y_rule.weights[d][oi[d]];
        }

        double inner = 0.0;
        std::fill(ii.begin(), ii.end(), std::size_t{0});
        for (;;) {
            double wt = 1.0;
            for (std::size_t d = 0; d < spec.s; ++d) {
                theta[d] = theta_rule.nodes[d][ii[d]];
                wt *= theta_rule.weights[d][ii[d]];
            }
            inner += wt * f(theta, y);
            std::size_t d = 0;
            while (d < spec.s && ++ii[d] == np) ii[d++] = 0;
            if (d == spec.s) break;
        }

        outer += wy * xlogx(scale * inner / theta_volume);
        std::size_t d = 0;
        while (d < spec.k && ++oi[d] == np) oi[d++] = 0;
        if (d == spec.k) break;
    }
    return outer;
}

}  // namespace

double dense_double_integral(
    const DenseQuadratureSpec& spec,
    const std::function<double(const std::vector<double>&, const std::vector<double>&)>& f,
    double scale) {
    if (spec.s < 1 || spec.s > 2 || spec.k < 1 || spec.k > 2)
        throw std::invalid_argument("dense_double_integral: dimensions must be 1 or 2");
    if (spec.theta_lower.size() != spec.s || spec.theta_upper.size() != spec.s ||
        spec.y_lower.size() != spec.k || spec.y_upper.size() != spec.k)
        throw std::invalid_argument("dense_double_integral: box size mismatch");
    for (std::size_t d = 0; d < spec.s; ++d)
        if (!(spec.theta_upper[d] > spec.theta_lower[d]))
            throw std::invalid_argument("dense_double_integral: empty theta box");
    for (std::size_t d = 0; d < spec.k; ++d)
        if (!(spec.y_upper[d] > spec.y_lower[d]))
            throw std::invalid_argument("dense_double_integral: empty y box");
    if (spec.points_per_dim < 1)
        throw std::invalid_argument("dense_double_integral: need at least one point");

    int p = spec.points_per_dim;
    auto guard = [&](int q) {
        const double evals = std::pow(static_cast<double>(q), static_cast<double>(spec.s + spec.k));
        if (evals > 1e8) throw std::runtime_error("dense_double_integral: node budget exceeded");
    };
    guard(p);
    double prev = dense_pass(spec, f, scale, p);
    for (int refinement = 0; refinement < 3; ++refinement) {
        p *= 2;
        guard(p);
        const double cur = dense_pass(spec, f, scale, p);
        if (std::abs(cur - prev) < 1e-8) return cur;
        prev = cur;
    }
    throw std::runtime_error("dense_double_integral: no convergence after three refinements");
}

namespace {

// Enumerates every multi-index of the given dimension with 1 <= |m| <= cap.
void for_each_multiindex(std::size_t dim, unsigned cap,
                         const std::function<void(const combinatorics::MultiIndex&)>& body) {
    combinatorics::MultiIndex m(dim, 0);
    for (;;) {
        std::size_t d = 0;
        while (d < dim) {
            if (combinatorics::order(m) < cap) {
                ++m[d];
                break;
            }
            m[d++] = 0;
        }
        if (d == dim) break;
        body(m);
    }
}

}  // namespace

LahSharpnessReport verify_lah_sharpness(unsigned max_order, std::size_t k_max) {
    if (max_order > 7) throw std::invalid_argument("verify_lah_sharpness: order too large");
    LahSharpnessReport report;
    const std::size_t dim_cap = std::min<std::size_t>(k_max, 3);
    for (std::size_t dim = 1; dim <= dim_cap; ++dim) {
        const std::vector<combinatorics::BigRat> unit_b(dim, combinatorics::BigRat(1));
        for_each_multiindex(dim, max_order, [&](const combinatorics::MultiIndex& nu) {
            const unsigned nu_order = combinatorics::order(nu);
            for_each_multiindex(dim, nu_order, [&](const combinatorics::MultiIndex& lam) {
                ++report.pairs_checked;
                const combinatorics::BigRat lhs = combinatorics::chi_exact(nu, lam, unit_b);
                const combinatorics::BigRat rhs = combinatorics::multivariate_lah(nu, lam);
                if (lhs != rhs) report.mismatches.emplace_back(nu, lam);
            });
        });
    }
    return report;
}

namespace {

// Nodes of the one-dimensional trapezoidal family as integer keys at the
// resolution 2^res_exp: level 0 is the midpoint, level m >= 1 the 2^m + 1
// equispaced points.
std::vector<std::uint64_t> axis_keys(int m, int res_exp) {
    std::vector<std::uint64_t> keys;
    if (m == 0) {
        keys.push_back(std::uint64_t{1} << (res_exp - 1));
        return keys;
    }
    const std::uint64_t stride = std::uint64_t{1} << (res_exp - m);
    const std::uint64_t count = (std::uint64_t{1} << m) + 1;
    for (std::uint64_t j = 0; j < count; ++j) keys.push_back(j * stride);
    return keys;
}

}  // namespace

std::uint64_t sparse_node_count(std::size_t k, int level) {
    if (k < 1 || k > 4) throw std::invalid_argument("sparse_node_count: k out of range");
    if (level < 0 || level > 12) throw std::invalid_argument("sparse_node_count: level out of range");
    const int res_exp = std::max(level, 1);
    const int band_lo = std::max(0, level - static_cast<int>(k) + 1);

    std::set<std::uint64_t> seen;
    std::vector<int> alpha(k, 0);
    // Walk the whole simplex |alpha| <= level and keep only the band entries.
    for (;;) {
        const int total = std::accumulate(alpha.begin(), alpha.end(), 0);
        if (total >= band_lo && total <= level) {
            std::vector<std::vector<std::uint64_t>> axes;
            for (std::size_t d = 0; d < k; ++d) axes.push_back(axis_keys(alpha[d], res_exp));
            std::vector<std::size_t> idx(k, 0);
            for (;;) {
                std::uint64_t packed = 0;
                for (std::size_t d = 0; d < k; ++d)
                    packed = (packed << 16) | axes[d][idx[d]];
                seen.insert(packed);
                std::size_t d = 0;
                while (d < k && ++idx[d] == axes[d].size()) idx[d++] = 0;
                if (d == k) break;
            }
        }
        std::size_t d = 0;
        while (d < k) {
            if (std::accumulate(alpha.begin(), alpha.end(), 0) < level) {
                ++alpha[d];
                break;
            }
            alpha[d++] = 0;
        }
        if (d == k) break;
    }
    return seen.size();
}

long long combination_coefficient_sum(std::size_t k, int level) {
    if (k < 1) throw std::invalid_argument("combination_coefficient_sum: k must be positive");
    if (level < 0) throw std::invalid_argument("combination_coefficient_sum: negative level");
    const int band_lo = std::max(0, level - static_cast<int>(k) + 1);
    long long sum = 0;
    for (int m = band_lo; m <= level; ++m) {
        const long long coeff =
            static_cast<long long>(combinatorics::binomial(static_cast<unsigned>(k - 1),
                                                           static_cast<unsigned>(level - m)));
        const long long slice =
            static_cast<long long>(combinatorics::binomial(static_cast<unsigned>(m + k - 1),
                                                           static_cast<unsigned>(k - 1)));
        sum += ((level - m) % 2 == 0 ? coeff : -coeff) * slice;
    }
    return sum;
}

}  // namespace eigqmc::oracle
