#include "eigqmc/weights.hpp"

#include "eigqmc/combinatorics.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace eigqmc::weights {

double zeta(double x) {
    if (!(x > 1.0)) throw std::invalid_argument("zeta: requires x > 1");
    // Euler-Maclaurin with N leading terms and four Bernoulli corrections.
    // For x > 1 and N = 32 the truncation error is far below 1e-13 relative.
    constexpr int N = 32;
    double s = 0.0;
    for (int n = 1; n < N; ++n) s += std::pow(n, -x);
    const double Nx = std::pow(N, -x);
    s += static_cast<double>(N) * Nx / (x - 1.0);  // N^{1-x}/(x-1)
    s += 0.5 * Nx;
    // B_2/2! x N^{-x-1}, B_4/4! x(x+1)(x+2) N^{-x-3}, ...
    const double b[] = {1.0 / 12.0, -1.0 / 720.0, 1.0 / 30240.0, -1.0 / 1209600.0};
    double rising = x;          // x (x+1) ... (x+2j-2)
    double npow = Nx / N;       // N^{-x-1}
    for (int j = 0; j < 4; ++j) {
        s += b[j] * rising * npow;
        rising *= (x + 2 * j + 1) * (x + 2 * j + 2);
        npow /= static_cast<double>(N) * N;
    }
    return s;
}

double rho(double lambda) {
    if (!(lambda > 0.5) || !(lambda <= 1.0))
        throw std::invalid_argument("rho: requires lambda in (1/2, 1]");
    const double two_pi_sq = 2.0 * std::numbers::pi * std::numbers::pi;
    return 2.0 * zeta(2.0 * lambda) / std::pow(two_pi_sq, lambda);
}

void RegularityParams::validate() const {
    if (!(C > 0.0)) throw std::invalid_argument("RegularityParams: C > 0 required");
    if (!(beta >= 1.0)) throw std::invalid_argument("RegularityParams: beta >= 1 required");
    if (b.empty()) throw std::invalid_argument("RegularityParams: b must be nonempty");
    for (std::size_t j = 0; j < b.size(); ++j) {
        if (!(b[j] > 0.0)) throw std::invalid_argument("RegularityParams: b_j > 0 required");
        if (j > 0 && b[j] > b[j - 1] + 1e-15)
            throw std::invalid_argument("RegularityParams: b must be non-increasing");
    }
    if (!(p > 0.0) || !(p < 1.0)) throw std::invalid_argument("RegularityParams: p in (0,1) required");
    if (!(mu_min > 0.0)) throw std::invalid_argument("RegularityParams: mu_min > 0 required");
    if (!(K > 0.0)) throw std::invalid_argument("RegularityParams: K > 0 required");
    if (k < 1) throw std::invalid_argument("RegularityParams: k >= 1 required");
}

std::string WeightSchedule::describe() const {
    std::ostringstream os;
    switch (kind_) {
        case Kind::Product: os << "product"; break;
        case Kind::Pod: os << "pod"; break;
        case Kind::OrderDependent: os << "order-dependent"; break;
        case Kind::Spod: os << "spod"; break;
    }
    os << " (dim=" << dimension() << ", lambda=" << lambda_ << ", alpha=" << alpha_ << ")";
    return os.str();
}

double WeightSchedule::degree_factor(std::size_t t) const {
    if (t == 0 || t >= degree_factors_.size())
        throw std::out_of_range("WeightSchedule::degree_factor");
    return degree_factors_[t];
}

double WeightSchedule::dim_term(std::size_t j, std::size_t m) const {
    if (m < 1 || m > alpha_) throw std::out_of_range("WeightSchedule::dim_term: degree");
    if (j >= dimension()) throw std::out_of_range("WeightSchedule::dim_term: dimension");
    return dim_terms_[m - 1][j];
}

double WeightSchedule::subset_weight(std::span<const std::size_t> members) const {
    if (members.empty()) return 1.0;
    std::vector<bool> seen(dimension(), false);
    for (std::size_t j : members) {
        if (j >= dimension()) throw std::out_of_range("subset_weight: member out of range");
        if (seen[j]) throw std::invalid_argument("subset_weight: repeated member");
        seen[j] = true;
    }
    // e[t] = sum over degree assignments with total t of prod phi_j(m_j),
    // built by polynomial multiplication over the members.
    const std::size_t tmax = alpha_ * members.size();
    std::vector<long double> e(tmax + 1, 0.0L);
    e[0] = 1.0L;
    std::size_t filled = 0;
    for (std::size_t j : members) {
        filled += alpha_;
        const std::size_t hi = std::min(filled, tmax);
        for (std::size_t t = hi;; --t) {
            long double acc = 0.0L;
            for (std::size_t m = 1; m <= std::min<std::size_t>(alpha_, t); ++m)
                acc += static_cast<long double>(dim_terms_[m - 1][j]) * e[t - m];
            e[t] = acc;
            if (t == 0) break;
        }
    }
    long double total = 0.0L;
    for (std::size_t t = members.size(); t <= tmax; ++t)
        total += static_cast<long double>(degree_factors_[t]) * e[t];
    return static_cast<double>(total);
}

WeightSchedule WeightSchedule::product(std::vector<double> factors) {
    WeightSchedule w;
    w.kind_ = Kind::Product;
    w.lambda_ = 1.0;
    w.alpha_ = 1;
    w.dim_terms_ = {std::move(factors)};
    w.degree_factors_.assign(w.dim_terms_[0].size() + 1, 1.0);
    return w;
}

namespace {

double lambda_from_params(const RegularityParams& params, double delta) {
    if (!(delta > 0.0) || !(delta < 0.5))
        throw std::invalid_argument("weights: delta must lie in (0, 1/2)");
    const double inv_beta = 1.0 / params.beta;
    if (std::abs(params.p - inv_beta) < 1e-14)
        throw std::invalid_argument("weights: p = 1/beta is not admissible");
    if (params.p > 2.0 / 3.0 && params.p < inv_beta) return params.p / (2.0 - params.p);
    if (params.p <= std::min(2.0 / 3.0, inv_beta)) return 1.0 / (2.0 - 2.0 * delta);
    throw std::invalid_argument("weights: p outside both admissible ranges");
}

// (x)^{2/(1+lambda)} factorial powers, computed in long double to postpone
// overflow for large orders.
std::vector<double> factorial_power_table(std::size_t tmax, double beta, double expo) {
    std::vector<double> d(tmax + 1, 0.0);
    long double log_fact = 0.0L;
    for (std::size_t t = 0; t <= tmax; ++t) {
        if (t > 0) log_fact += std::log(static_cast<long double>(t));
        d[t] = static_cast<double>(std::exp(static_cast<long double>(beta) * log_fact * expo));
    }
    return d;
}

}  // namespace

WeightSchedule pod_weights_inner(const RegularityParams& params, double delta) {
    params.validate();
    const double lambda = lambda_from_params(params, delta);
    const double expo = 2.0 / (1.0 + lambda);
    const double sqrt_rho = std::sqrt(rho(lambda));
    WeightSchedule w;
    w.kind_ = WeightSchedule::Kind::Pod;
    w.lambda_ = lambda;
    w.alpha_ = 1;
    const std::size_t s = params.b.size();
    w.degree_factors_ = factorial_power_table(s, params.beta, expo);
    std::vector<double> phi(s);
    for (std::size_t j = 0; j < s; ++j) {
        const double c_j = std::pow(2.0, params.beta) * params.C * params.b[j] /
                           std::sqrt(params.mu_min);
        phi[j] = std::pow(c_j / sqrt_rho, expo);
    }
    w.dim_terms_ = {std::move(phi)};
    return w;
}

WeightSchedule order_dependent_weights_outer(const RegularityParams& params, double delta) {
    params.validate();
    if (!(delta > 0.0) || !(delta < 0.5))
        throw std::invalid_argument("weights: delta must lie in (0, 1/2)");
    const double lambda = 1.0 / (2.0 - 2.0 * delta);
    const double expo = 2.0 / (1.0 + lambda);
    const double k = static_cast<double>(params.k);
    const double arg = (k * params.K * params.K +
                        2.0 * std::sqrt(k) * params.K * params.C + params.C * params.C) /
                       (2.0 * params.mu_min);
    const double a = std::pow(1.1, k) * k / std::sqrt(params.mu_min) * std::exp(arg) /
                     (std::log(2.0) * std::sqrt(rho(lambda)));
    WeightSchedule w;
    w.kind_ = WeightSchedule::Kind::OrderDependent;
    w.lambda_ = lambda;
    w.alpha_ = 1;
    const std::size_t dim = static_cast<std::size_t>(params.k);
    w.degree_factors_ = factorial_power_table(dim, 1.0, expo);
    w.dim_terms_ = {std::vector<double>(dim, std::pow(a, expo))};
    return w;
}

WeightSchedule spod_weights_periodic(const RegularityParams& params) {
    params.validate();
    if (!(params.p < 1.0 / params.beta))
        throw std::invalid_argument("spod_weights_periodic: requires p < 1/beta");
    const std::size_t alpha = static_cast<std::size_t>(std::floor(1.0 / params.p)) + 1;
    WeightSchedule w;
    w.kind_ = WeightSchedule::Kind::Spod;
    w.lambda_ = 1.0;  // not used by this family's construction
    w.alpha_ = alpha;
    const std::size_t s = params.b.size();
    const std::size_t tmax = alpha * s;
    // D_t = (t!)^beta C^t 2^{beta (t-1)} mu_min^{-t/2}
    w.degree_factors_.assign(tmax + 1, 0.0);
    {
        long double log_fact = 0.0L;
        for (std::size_t t = 0; t <= tmax; ++t) {
            if (t > 0) log_fact += std::log(static_cast<long double>(t));
            const long double lg =
                static_cast<long double>(params.beta) * log_fact +
                static_cast<long double>(t) * std::log(static_cast<long double>(params.C)) +
                static_cast<long double>(params.beta) * (static_cast<long double>(t) - 1.0L) *
                    std::log(2.0L) -
                0.5L * static_cast<long double>(t) *
                    std::log(static_cast<long double>(params.mu_min));
            w.degree_factors_[t] = static_cast<double>(std::exp(lg));
        }
    }
    // phi_j(m) = b_j^m S(alpha, m)
    w.dim_terms_.assign(alpha, std::vector<double>(s, 0.0));
    for (std::size_t m = 1; m <= alpha; ++m) {
        const double stirling =
            combinatorics::stirling2(static_cast<unsigned>(alpha), static_cast<unsigned>(m))
                .convert_to<double>();
        for (std::size_t j = 0; j < s; ++j)
            w.dim_terms_[m - 1][j] = std::pow(params.b[j], static_cast<double>(m)) * stirling;
    }
    return w;
}

WeightSchedule cbc_schedule_inner(const RegularityParams& params, double delta) {
    params.validate();
    const double lambda = lambda_from_params(params, delta);
    const double expo = 2.0 / (1.0 + lambda);
    WeightSchedule w;
    w.kind_ = WeightSchedule::Kind::Pod;
    w.lambda_ = lambda;
    w.alpha_ = 1;
    const std::size_t s = params.b.size();
    w.degree_factors_ = factorial_power_table(s, params.beta, expo);
    std::vector<double> phi(s);
    for (std::size_t j = 0; j < s; ++j) phi[j] = std::pow(params.b[j], expo);
    w.dim_terms_ = {std::move(phi)};
    return w;
}

WeightSchedule cbc_schedule_outer(const RegularityParams& params, double delta) {
    params.validate();
    if (!(delta > 0.0) || !(delta < 0.5))
        throw std::invalid_argument("weights: delta must lie in (0, 1/2)");
    const double lambda = 1.0 / (2.0 - 2.0 * delta);
    const double expo = 2.0 / (1.0 + lambda);
    WeightSchedule w;
    w.kind_ = WeightSchedule::Kind::OrderDependent;
    w.lambda_ = lambda;
    w.alpha_ = 1;
    const std::size_t dim = static_cast<std::size_t>(params.k);
    w.degree_factors_ = factorial_power_table(dim, 1.0, expo);
    w.dim_terms_ = {std::vector<double>(dim, 1.0)};
    return w;
}

WeightSchedule cbc_schedule_periodic(const RegularityParams& params) {
    params.validate();
    if (!(params.p < 1.0 / params.beta))
        throw std::invalid_argument("cbc_schedule_periodic: requires p < 1/beta");
    const std::size_t alpha = static_cast<std::size_t>(std::floor(1.0 / params.p)) + 1;
    WeightSchedule w;
    w.kind_ = WeightSchedule::Kind::Spod;
    w.lambda_ = 1.0;
    w.alpha_ = alpha;
    const std::size_t s = params.b.size();
    w.degree_factors_ = factorial_power_table(alpha * s, params.beta, 1.0);
    w.dim_terms_.assign(alpha, std::vector<double>(s, 0.0));
    for (std::size_t m = 1; m <= alpha; ++m) {
        const double stirling =
            combinatorics::stirling2(static_cast<unsigned>(alpha), static_cast<unsigned>(m))
                .convert_to<double>();
        for (std::size_t j = 0; j < s; ++j)
            w.dim_terms_[m - 1][j] = std::pow(params.b[j], static_cast<double>(m)) * stirling;
    }
    return w;
}

}  // namespace eigqmc::weights
