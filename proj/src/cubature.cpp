#include "eigqmc/cubature.hpp"

#include "eigqmc/util.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <stdexcept>

namespace eigqmc::cubature {

double g_xlogx(double x) {
    if (x < 0.0) throw std::domain_error("g_xlogx: negative argument");
    if (x == 0.0) return 0.0;
    return x * std::log(x);
}

void NestedIntegrand::prepare_thetas(const std::vector<std::vector<double>>& thetas) {
    thetas_ = &thetas;
}

namespace {

std::uint64_t node_count(int level, int offset) {
    if (level + offset < 0 || level + offset > 40)
        throw std::invalid_argument("cubature: level + offset out of range");
    return std::uint64_t{1} << (level + offset);
}

void validate_config(const EstimatorConfig& config, const NestedIntegrand& integrand) {
    const int s = integrand.theta_dimension();
    const int k = integrand.data_dimension();
    if (static_cast<int>(config.data_box.dimension()) != k)
        throw std::invalid_argument("cubature: data box dimension mismatch");
    if (static_cast<int>(config.inner_z.dimension()) < s)
        throw std::invalid_argument("cubature: inner generating vector too short");
    if (config.outer_family == OuterFamily::Lattice &&
        static_cast<int>(config.outer_z.dimension()) < k)
        throw std::invalid_argument("cubature: outer generating vector too short");
    if (config.shift_count < 1) throw std::invalid_argument("cubature: shift_count >= 1");
    if (config.level < 0) throw std::invalid_argument("cubature: level >= 0");
    if (!(config.sigma > 0.0)) throw std::invalid_argument("cubature: sigma > 0");
}

// Inner levels of the combined estimator: for Stp at level L, step l1 uses the
// inner rule at level sigma (L - sigma l1); sigma must make every index a
// nonnegative integer.
std::vector<int> stp_inner_levels(int L, double sigma) {
    const int steps = static_cast<int>(std::floor(L / sigma + 1e-9));
    std::vector<int> inner(steps + 1);
    for (int l1 = 0; l1 <= steps; ++l1) {
        const double raw = sigma * (L - sigma * l1);
        const int rounded = static_cast<int>(std::lround(raw));
        if (std::abs(raw - rounded) > 1e-9 || rounded < 0)
            throw std::invalid_argument("cubature: sigma incompatible with level");
        inner[l1] = rounded;
    }
    return inner;
}

struct InnerPointSet {
    std::vector<std::vector<double>> thetas;
};

InnerPointSet inner_points(const EstimatorConfig& config, int s, int level,
                           std::span<const double> shift) {
    const std::uint64_t n = node_count(level, config.inner_offset);
    InnerPointSet set;
    set.thetas.assign(n, std::vector<double>(s));
    for (std::uint64_t i = 1; i <= n; ++i) {
        auto& th = set.thetas[i - 1];
        for (int j = 0; j < s; ++j)
            th[j] = qmc::lattice_coord(i, config.inner_z.component(j), n, shift[j]) - 0.5;
    }
    return set;
}

}  // namespace

WeightedNodes smolyak_trapezoid(int k, int q) {
    if (k < 1) throw std::invalid_argument("smolyak_trapezoid: k >= 1");
    if (q < 0 || q > 30) throw std::invalid_argument("smolyak_trapezoid: q in [0, 30]");
    // Per-axis rules as (numerator at resolution 2^res_exp, weight) lists;
    // res_exp >= 1 so the level-0 midpoint has an integer numerator.
    const int res_exp = std::max(q, 1);
    const auto axis_rule = [res_exp](int m) {
        std::vector<std::pair<std::uint64_t, double>> r;
        if (m == 0) {
            r.emplace_back(std::uint64_t{1} << (res_exp - 1), 1.0);
            return r;
        }
        const std::uint64_t stride = std::uint64_t{1} << (res_exp - m);
        const std::uint64_t pts = (std::uint64_t{1} << m) + 1;
        const double h = 1.0 / static_cast<double>(std::uint64_t{1} << m);
        for (std::uint64_t j = 0; j < pts; ++j)
            r.emplace_back(j * stride, (j == 0 || j == pts - 1) ? h / 2.0 : h);
        return r;
    };
    // Binomial C(k-1, d) for small arguments.
    const auto choose = [](int n, int r) {
        double c = 1.0;
        for (int i = 1; i <= r; ++i) c = c * (n - r + i) / i;
        return c;
    };

    std::map<std::vector<std::uint64_t>, double> acc;
    std::vector<int> alpha(k, 0);
    const int lo = std::max(0, q - k + 1);
    // Enumerate all alpha in N_0^k with lo <= |alpha| <= q.
    const std::function<void(int, int)> recurse = [&](int axis, int remaining) {
        if (axis == k - 1) {
            for (int last = std::max(0, lo - (q - remaining)); last <= remaining; ++last) {
                alpha[axis] = last;
                int total = q - remaining + last;
                if (total < lo || total > q) continue;
                const double coeff = ((q - total) % 2 == 0 ? 1.0 : -1.0) * choose(k - 1, q - total);
                // Tensor iteration over the axis rules.
                std::vector<std::vector<std::pair<std::uint64_t, double>>> rules;
                for (int j = 0; j < k; ++j) rules.push_back(axis_rule(alpha[j]));
                std::vector<std::size_t> idx(k, 0);
                std::vector<std::uint64_t> key(k);
                for (;;) {
                    double w = coeff;
                    for (int j = 0; j < k; ++j) {
                        key[j] = rules[j][idx[j]].first;
                        w *= rules[j][idx[j]].second;
                    }
                    acc[key] += w;
                    int c = 0;
                    while (c < k) {
                        if (++idx[c] < rules[c].size()) break;
                        idx[c] = 0;
                        ++c;
                    }
                    if (c == k) break;
                }
            }
            return;
        }
        for (int v = 0; v <= remaining; ++v) {
            alpha[axis] = v;
            recurse(axis + 1, remaining - v);
        }
    };
    recurse(0, q);

    WeightedNodes out;
    out.dim = k;
    const double res = static_cast<double>(std::uint64_t{1} << res_exp);
    for (const auto& [key, w] : acc) {
        for (int j = 0; j < k; ++j) out.coords.push_back(static_cast<double>(key[j]) / res);
        out.weights.push_back(w);
    }
    out.count = out.weights.size();
    out.fresh = out.count;
    return out;
}

namespace {

// Map unit-cube nodes into the data box and scale the weights by its volume.
void apply_box(WeightedNodes& nodes, const qmc::Box& box) {
    const double vol = box.volume();
    for (std::size_t i = 0; i < nodes.count; ++i)
        for (int j = 0; j < nodes.dim; ++j) {
            double& c = nodes.coords[i * nodes.dim + j];
            c = box.lower[j] + (box.upper[j] - box.lower[j]) * c;
        }
    for (double& w : nodes.weights) w *= vol;
}

WeightedNodes lattice_outer_nodes(const EstimatorConfig& config, int level,
                                  std::span<const double> shift, bool difference) {
    const int k = static_cast<int>(config.data_box.dimension());
    const std::uint64_t n = node_count(level, config.outer_offset);
    WeightedNodes out;
    out.dim = k;
    out.count = n;
    out.coords.resize(n * k);
    out.weights.resize(n);
    const bool diff = difference && level >= 1;
    const double w_fine = 1.0 / static_cast<double>(n);
    for (std::uint64_t i = 1; i <= n; ++i) {
        for (int j = 0; j < k; ++j)
            out.coords[(i - 1) * k + j] =
                qmc::lattice_coord(i, config.outer_z.component(j), n, shift[j]);
        // Points with even index i belong to the next-coarser rule (index i/2
        // at count n/2), which carries weight 2/n there.
        out.weights[i - 1] = diff && (i % 2 == 0) ? -w_fine : w_fine;
    }
    out.fresh = diff ? n / 2 : n;
    apply_box(out, config.data_box);
    return out;
}

WeightedNodes smolyak_outer_nodes(const EstimatorConfig& config, int level, bool difference) {
    const int k = static_cast<int>(config.data_box.dimension());
    const int q = level + config.smolyak_index_shift;
    WeightedNodes fine = smolyak_trapezoid(k, q);
    if (!difference || level == 0) {
        WeightedNodes out = fine;
        apply_box(out, config.data_box);
        return out;
    }
    const WeightedNodes coarse = smolyak_trapezoid(k, q - 1);
    // Subtract the coarse rule; its nodes are a subset of the fine rule's
    // (nested axis rules), matched here by exact dyadic coordinates.
    std::map<std::vector<std::uint64_t>, double> acc;
    std::vector<std::uint64_t> key(k);
    const auto key_of = [&](const WeightedNodes& src, std::size_t i) {
        for (int j = 0; j < k; ++j) {
            // Coordinates are exact multiples of 2^-40 well beyond any level
            // used here; rescale to integers for exact matching.
            key[j] = static_cast<std::uint64_t>(std::llround(src.coords[i * k + j] * 0x1p40));
        }
        return key;
    };
    for (std::size_t i = 0; i < fine.count; ++i) acc[key_of(fine, i)] += fine.weights[i];
    for (std::size_t i = 0; i < coarse.count; ++i) acc[key_of(coarse, i)] -= coarse.weights[i];
    WeightedNodes out;
    out.dim = k;
    for (const auto& [kk, w] : acc) {
        for (int j = 0; j < k; ++j)
            out.coords.push_back(static_cast<double>(kk[j]) * 0x1p-40);
        out.weights.push_back(w);
    }
    out.count = out.weights.size();
    out.fresh = fine.count - coarse.count;
    apply_box(out, config.data_box);
    return out;
}

}  // namespace

WeightedNodes outer_rule_nodes(const EstimatorConfig& config, int level,
                               std::span<const double> shift, bool difference) {
    if (config.outer_family == OuterFamily::Lattice)
        return lattice_outer_nodes(config, level, shift, difference);
    return smolyak_outer_nodes(config, level, difference);
}

std::vector<std::vector<double>> derive_outer_shifts(const EstimatorConfig& config) {
    std::uint64_t state = config.seed;
    const std::uint64_t outer_seed = util::splitmix64(state);
    return qmc::make_shifts({outer_seed, config.data_box.dimension(),
                             static_cast<std::size_t>(config.shift_count)});
}

std::vector<std::vector<double>> derive_inner_shifts(const EstimatorConfig& config) {
    std::uint64_t state = config.seed;
    (void)util::splitmix64(state);
    const std::uint64_t inner_seed = util::splitmix64(state);
    return qmc::make_shifts({inner_seed, config.inner_z.dimension(),
                             static_cast<std::size_t>(config.shift_count)});
}

double inner_average(const EstimatorConfig& config, NestedIntegrand& integrand, int level,
                     std::span<const double> inner_shift, std::span<const double> y) {
    const InnerPointSet set =
        inner_points(config, integrand.theta_dimension(), level, inner_shift);
    integrand.prepare_thetas(set.thetas);
    std::vector<double> logf(set.thetas.size());
    for (std::size_t i = 0; i < set.thetas.size(); ++i) logf[i] = integrand.log_f(i, y);
    const double log_mean =
        util::log_sum_exp(logf) - std::log(static_cast<double>(set.thetas.size()));
    const double mean = std::exp(log_mean);
    if (!(mean > 0.0) || !std::isfinite(mean))
        throw std::runtime_error("cubature: inner average must be strictly positive");
    return mean;
}

namespace {

// One outer quadrature pass of g(scale * inner mean) for a fixed inner rule.
// Per-node values land in a vector by index, so the reduction is independent
// of the thread count.
double weighted_pass(NestedIntegrand& integrand,
                     const WeightedNodes& nodes, const InnerPointSet& inner, unsigned threads) {
    integrand.prepare_thetas(inner.thetas);
    const std::size_t n_in = inner.thetas.size();
    const double log_n = std::log(static_cast<double>(n_in));
    const double scale = integrand.scale();
    std::vector<double> contrib(nodes.count);
    util::parallel_for(nodes.count, threads, [&](std::size_t lo, std::size_t hi) {
        std::vector<double> logf(n_in);
        for (std::size_t i = lo; i < hi; ++i) {
            const std::span<const double> y(nodes.coords.data() + i * nodes.dim,
                                            static_cast<std::size_t>(nodes.dim));
            for (std::size_t t = 0; t < n_in; ++t) logf[t] = integrand.log_f(t, y);
            const double mean = std::exp(util::log_sum_exp(logf) - log_n);
            if (!(mean > 0.0) || !std::isfinite(mean))
                throw std::runtime_error("cubature: inner average must be strictly positive");
            contrib[i] = nodes.weights[i] * g_xlogx(scale * mean);
        }
    });
    return util::pairwise_sum(contrib);
}

}  // namespace

EstimateResult estimate(const EstimatorConfig& config, NestedIntegrand& integrand) {
    validate_config(config, integrand);
    const unsigned threads =
        config.threads == 0 ? util::default_thread_count() : config.threads;
    const auto outer_shifts = derive_outer_shifts(config);
    const auto inner_shifts = derive_inner_shifts(config);
    const int s = integrand.theta_dimension();

    EstimateResult result;
    result.per_shift.resize(config.shift_count);
    const int top_inner_level = config.method == Method::Stp
                                    ? stp_inner_levels(config.level, config.sigma)[0]
                                    : config.level;
    result.n_inner = node_count(top_inner_level, config.inner_offset);
    if (config.outer_family == OuterFamily::Lattice) {
        result.n_outer = node_count(config.level, config.outer_offset);
    } else {
        result.n_outer =
            smolyak_trapezoid(static_cast<int>(config.data_box.dimension()),
                              config.level + config.smolyak_index_shift)
                .count;
    }

    for (int r = 0; r < config.shift_count; ++r) {
        const auto& outer_shift = outer_shifts[r];
        const auto& inner_shift = inner_shifts[r];
        double value = 0.0;
        if (config.method == Method::Ftp) {
            const WeightedNodes nodes =
                outer_rule_nodes(config, config.level, outer_shift, false);
            const InnerPointSet inner = inner_points(config, s, config.level, inner_shift);
            value = weighted_pass(integrand, nodes, inner, threads);
            result.budget.gross += static_cast<std::uint64_t>(nodes.count) * inner.thetas.size();
            result.budget.net += nodes.fresh * inner.thetas.size();
        } else {
            const std::vector<int> inner_levels = stp_inner_levels(config.level, config.sigma);
            for (std::size_t l1 = 0; l1 < inner_levels.size(); ++l1) {
                const WeightedNodes nodes =
                    outer_rule_nodes(config, static_cast<int>(l1), outer_shift, l1 > 0);
                const InnerPointSet inner =
                    inner_points(config, s, inner_levels[l1], inner_shift);
                value += weighted_pass(integrand, nodes, inner, threads);
                result.budget.gross +=
                    static_cast<std::uint64_t>(nodes.count) * inner.thetas.size();
                result.budget.net += nodes.fresh * inner.thetas.size();
            }
        }
        result.per_shift[r] = value;
    }
    result.mean = util::pairwise_mean(result.per_shift);
    return result;
}

EstimateResult stp_full_triangle(const EstimatorConfig& config, NestedIntegrand& integrand) {
    validate_config(config, integrand);
    if (config.method != Method::Stp)
        throw std::invalid_argument("stp_full_triangle: method must be Stp");
    const unsigned threads =
        config.threads == 0 ? util::default_thread_count() : config.threads;
    const auto outer_shifts = derive_outer_shifts(config);
    const auto inner_shifts = derive_inner_shifts(config);
    const int s = integrand.theta_dimension();

    EstimateResult result;
    result.per_shift.resize(config.shift_count);
    for (int r = 0; r < config.shift_count; ++r) {
        const std::vector<int> inner_tops = stp_inner_levels(config.level, config.sigma);
        double value = 0.0;
        for (std::size_t l1 = 0; l1 < inner_tops.size(); ++l1) {
            const WeightedNodes nodes =
                outer_rule_nodes(config, static_cast<int>(l1), outer_shifts[r], l1 > 0);
            for (int l2 = 0; l2 <= inner_tops[l1]; ++l2) {
                // Difference of g-composed inner means between levels l2, l2-1.
                const InnerPointSet fine = inner_points(config, s, l2, inner_shifts[r]);
                const double hi = weighted_pass(integrand, nodes, fine, threads);
                double lo = 0.0;
                if (l2 > 0) {
                    const InnerPointSet coarse =
                        inner_points(config, s, l2 - 1, inner_shifts[r]);
                    lo = weighted_pass(integrand, nodes, coarse, threads);
                }
                value += hi - lo;
            }
        }
        result.per_shift[r] = value;
    }
    result.mean = util::pairwise_mean(result.per_shift);
    return result;
}

NodeBudget node_budget(const EstimatorConfig& config) {
    if (config.level < 0) throw std::invalid_argument("node_budget: level >= 0");
    NodeBudget budget;
    const int k = static_cast<int>(config.data_box.dimension());
    const auto outer_count = [&](int level, bool difference) -> std::pair<std::uint64_t, std::uint64_t> {
        if (config.outer_family == OuterFamily::Lattice) {
            const std::uint64_t n = node_count(level, config.outer_offset);
            return {n, difference && level >= 1 ? n / 2 : n};
        }
        const std::uint64_t fine =
            smolyak_trapezoid(k, level + config.smolyak_index_shift).count;
        if (!difference || level == 0) return {fine, fine};
        const std::uint64_t coarse =
            smolyak_trapezoid(k, level + config.smolyak_index_shift - 1).count;
        return {fine, fine - coarse};
    };
    if (config.method == Method::Ftp) {
        const auto [cnt, fresh] = outer_count(config.level, false);
        const std::uint64_t n_in = node_count(config.level, config.inner_offset);
        budget.gross = cnt * n_in;
        budget.net = fresh * n_in;
    } else {
        const std::vector<int> inner_levels = stp_inner_levels(config.level, config.sigma);
        for (std::size_t l1 = 0; l1 < inner_levels.size(); ++l1) {
            const auto [cnt, fresh] = outer_count(static_cast<int>(l1), l1 > 0);
            const std::uint64_t n_in = node_count(inner_levels[l1], config.inner_offset);
            budget.gross += cnt * n_in;
            budget.net += fresh * n_in;
        }
    }
    budget.gross *= static_cast<std::uint64_t>(config.shift_count);
    budget.net *= static_cast<std::uint64_t>(config.shift_count);
    return budget;
}

}  // namespace eigqmc::cubature
