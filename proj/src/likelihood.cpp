#include "eigqmc/likelihood.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace eigqmc::likelihood {

NoiseModel NoiseModel::scaled_identity(int k, double gamma) {
    if (k < 1) throw std::invalid_argument("NoiseModel: k >= 1 required");
    if (!(gamma > 0.0)) throw std::invalid_argument("NoiseModel: gamma > 0 required");
    return from_matrix(gamma * Eigen::MatrixXd::Identity(k, k));
}

NoiseModel NoiseModel::from_matrix(const Eigen::MatrixXd& gamma) {
    if (gamma.rows() != gamma.cols() || gamma.rows() < 1)
        throw std::invalid_argument("NoiseModel: Gamma must be square and nonempty");
    if (!gamma.isApprox(gamma.transpose(), 1e-12))
        throw std::invalid_argument("NoiseModel: Gamma must be symmetric");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gamma);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("NoiseModel: eigendecomposition failed");
    const Eigen::VectorXd& ev = es.eigenvalues();
    if (ev.minCoeff() <= 0.0)
        throw std::invalid_argument("NoiseModel: Gamma must be positive definite");
    NoiseModel m;
    m.mu_min_ = ev.minCoeff();
    m.inv_sqrt_ = es.eigenvectors() * ev.cwiseSqrt().cwiseInverse().asDiagonal() *
                  es.eigenvectors().transpose();
    double log_det_2pi_gamma = 0.0;
    for (Eigen::Index i = 0; i < ev.size(); ++i)
        log_det_2pi_gamma += std::log(2.0 * std::numbers::pi * ev[i]);
    m.log_norm_ = -0.5 * log_det_2pi_gamma;
    return m;
}

double NoiseModel::normalizer() const { return std::exp(log_norm_); }

double NoiseModel::potential(std::span<const double> y, std::span<const double> G) const {
    const int dim = k();
    if (static_cast<int>(y.size()) != dim || static_cast<int>(G.size()) != dim)
        throw std::invalid_argument("NoiseModel::potential: dimension mismatch");
    Eigen::VectorXd r(dim);
    for (int i = 0; i < dim; ++i) r[i] = y[i] - G[i];
    return 0.5 * (inv_sqrt_ * r).squaredNorm();
}

double NoiseModel::log_density(std::span<const double> y, std::span<const double> G) const {
    return log_norm_ - potential(y, G);
}

double NoiseModel::density(std::span<const double> y, std::span<const double> G) const {
    return std::exp(log_density(y, G));
}

TruncationChoice choose_truncation(const NoiseModel& noise, std::span<const double> G_bar,
                                   double eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("choose_truncation: eps > 0 required");
    if (static_cast<int>(G_bar.size()) != noise.k())
        throw std::invalid_argument("choose_truncation: dimension mismatch");
    const double mu = noise.mu_min();
    double M = 0.0, norm_sq = 0.0;
    for (double g : G_bar) {
        M = std::max(M, std::abs(g));
        norm_sq += g * g;
    }
    // log of C^{1/2} e^{||G||^2/(4 mu)} / eps
    const double log_arg = 0.5 * noise.log_normalizer() + norm_sq / (4.0 * mu) - std::log(eps);
    TruncationChoice choice;
    if (log_arg <= 0.0) {
        choice.K = M;
        choice.tail_bound = std::exp(0.5 * noise.log_normalizer() + norm_sq / (4.0 * mu));
    } else {
        choice.K = M + 2.0 * std::sqrt(mu * log_arg);
        const double d = choice.K - M;
        choice.tail_bound = std::exp(0.5 * noise.log_normalizer() + norm_sq / (4.0 * mu) -
                                     d * d / (4.0 * mu));
    }
    return choice;
}

double tail_bound_erf(const NoiseModel& noise, std::span<const double> G_bar, double K) {
    if (!(K >= 0.0)) throw std::invalid_argument("tail_bound_erf: K >= 0 required");
    if (static_cast<int>(G_bar.size()) != noise.k())
        throw std::invalid_argument("tail_bound_erf: dimension mismatch");
    const double mu = noise.mu_min();
    const int k = noise.k();
    double norm_sq = 0.0;
    for (double g : G_bar) norm_sq += g * g;
    const double pref = std::exp(0.5 * noise.log_normalizer() + norm_sq / (4.0 * mu));
    const double full = std::pow(4.0 * std::numbers::pi * mu, 0.5 * k);
    double prod = std::pow(std::numbers::pi * mu, 0.5 * k);
    for (double g : G_bar) {
        const double hi = std::erf((g + K) / (2.0 * std::sqrt(mu)));
        const double lo = std::erf((g - K) / (2.0 * std::sqrt(mu)));
        prod *= hi - lo;
    }
    return pref * std::max(full - prod, 0.0);
}

}  // namespace eigqmc::likelihood
